#pragma once

// Coordinate-only relaxation: maximize F(alpha) = sum alpha_i ln alpha_i over
// k coordinates with sum alpha = 1 and sum alpha^2 = 1/s, ignoring which sets
// realize the weights.

#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace chromopt::relaxation {

/// Sentinel for F at an invalid point; compares below every real value.
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// x * ln x extended by continuity: 0 at x = 0, kNegInf for x < 0.
double xlogx(double x);

struct RelaxedSolution {
    int k = 0;
    double delta = 0.0;
    /// Number of coordinates pinned at the floor delta.
    int ell = 0;
    /// Effective constraint ratio after removing the pinned coordinates:
    /// s * (1 - ell*delta)^2 / (1 - ell*s*delta^2).
    double s_star = 0.0;
    /// Nonincreasing: the free coordinates form a two-value pattern
    /// x,...,x,y with y > delta, followed by ell copies of delta.
    std::vector<double> alphas;
    double F = 0.0;
};

/// Maximizes F over k coordinates bounded below by delta. For each pinned
/// count ell the free block must satisfy k - ell = ceil(s_star); the best
/// valid ell is returned, or nothing when no ell admits a solution.
/// Throws for s <= 1, k < ceil(s), or delta outside [0, 1/k).
std::optional<RelaxedSolution> relaxed_solve(double s, int k, double delta);

/// Closed-form upper bound for F with ell coordinates pinned at delta:
/// (1 - ell*delta) * (ln(1 - ell*delta) - ln s_star) + ell * delta * ln delta.
/// At delta = 0 this is -ln s. Throws for s <= 1, ell < 0, delta outside
/// [0, 1), ell*delta >= 1, or 1 - ell*s*delta^2 <= 0.
double relaxed_bound(double s, double delta, int ell);

/// Arc through the three-coordinate constraint set:
///   alpha1 = 1/3 + (rho/sqrt 6) cos t + (rho/sqrt 2) sin t
///   alpha2 = 1/3 + (rho/sqrt 6) cos t - (rho/sqrt 2) sin t
///   alpha3 = 1/3 - (2 rho/sqrt 6) cos t
/// with rho = sqrt((3 - s)/(3s)). Throws for s outside (1, 3].
struct ThetaPoint {
    double alpha1 = 0.0, alpha2 = 0.0, alpha3 = 0.0;
};
ThetaPoint theta_param(double s, double theta);

/// F along the arc; kNegInf when a coordinate is negative.
double f_of_theta(double s, double theta);

/// Finite-difference step used for the arc derivatives.
inline constexpr double kFdStep = 1e-5;

struct ThetaProfile {
    /// (theta, F) samples on [0, pi/3], endpoints included.
    std::vector<std::pair<double, double>> samples;
    /// Central differences at theta = pi/3 with step kFdStep.
    double fd_first = 0.0;
    double fd_second = 0.0;
};

/// Samples F on a uniform grid of `grid` points over [0, pi/3] (grid >= 2)
/// and attaches finite-difference first and second derivatives at pi/3.
ThetaProfile f_theta_profile(double s, int grid);

/// Exact second derivative of F along the arc at theta = pi/3:
///   rho^2 / a - (2 rho / sqrt 6) * ln(b / a)
/// with a = 1/3 - rho/sqrt 6 and b = 1/3 + 2 rho/sqrt 6. This resolves signs
/// far below finite-difference precision (the true value decays like rho^3
/// as s approaches 3).
double corner_second_derivative(double s);

/// Smallest theta in [0, pi/3] with alpha3(theta) >= delta, found by
/// bisection (alpha3 is increasing on the interval). Returns 0 when already
/// true at theta = 0; throws when even theta = pi/3 stays below delta.
double theta_zero(double s, double delta);

std::string to_json_string(const RelaxedSolution& r);

}  // namespace chromopt::relaxation
