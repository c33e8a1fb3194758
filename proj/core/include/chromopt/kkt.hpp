#pragma once

// Closed-form stationary points of the restricted problems on a fixed
// support shape, and the exhaustive solver that scans all admissible shapes.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chromopt/colorsets.hpp"
#include "chromopt/supports.hpp"

namespace chromopt::kkt {

/// Coordinates are declared nonnegative when they are >= -kAlphaTol.
inline constexpr double kAlphaTol = 1e-12;

/// Stationary points whose objectives differ by at most this are ties.
inline constexpr double kTieWindow = 1e-9;

struct StationaryPoint {
    supports::SizedCandidate candidate;
    /// One weight per part, ordered like candidate.sizes. For kQ candidates
    /// the weight of the merged union is appended after the k part weights.
    std::vector<double> alphas;
    double lambda = 0.0;
    double mu = 0.0;
    double objective = 0.0;
    bool feasible = false;
};

/// Multiplier solution on a fixed partition shape. Requires kind kP and
/// k >= ceil(s); throws otherwise. Returns nothing when the closed form
/// produces a negative weight (below -kAlphaTol) or is undefined.
///
/// For k parts with s < k: lambda = k * sqrt((s/(k-s)) * (S2 - S1^2)) where
/// S1, S2 are the mean and mean square of the log sizes; mu = S1 - lambda/k;
/// alpha_i = (ln A_i - mu)/lambda; objective = mu + lambda/s. For k = s the
/// weights are forced uniform and the objective is S1. When all sizes are
/// equal and k > s (lambda degenerates to 0) the reported weights are the
/// two-value vector x,...,x,y with (k-1)x + y = 1, (k-1)x^2 + y^2 = 1/s and
/// x >= y; the objective does not depend on that choice.
std::optional<StationaryPoint> solve_pk(const supports::SizedCandidate& c, double s);

/// Multiplier solution on a fixed near-partition shape (kind kQ). Requires
/// k - 1 != s; throws otherwise. Returns nothing when the discriminant is
/// nonpositive, a weight falls below -kAlphaTol, or the merged-union weight
/// is not strictly positive.
std::optional<StationaryPoint> solve_qk(const supports::SizedCandidate& c, double s);

struct SolveReport {
    int q = 0;
    double s = 0.0;
    bool paranoid = false;
    double opt_value = 0.0;
    StationaryPoint best;
    /// Further feasible points with objective within kTieWindow of the best,
    /// in candidate order (partition shapes before near-partition shapes,
    /// ascending part count, then enumeration order).
    std::vector<StationaryPoint> ties;
    long long candidates_evaluated = 0;
};

/// Scans every admissible support shape and reports the best stationary
/// point. Partition shapes run over k in [ceil(s), q], except that k = q is
/// admissible only when ceil(s) = q. Near-partition shapes are evaluated at
/// k = ceil(s) for non-integer s; with paranoid=true they are additionally
/// swept over every k (diagnostic only). Throws for q outside [1, 30] or s
/// outside (1, q].
SolveReport global_solve(int q, double s, bool paranoid = false);

/// Independent numeric baseline over all 2^q - 1 coordinates, with no
/// knowledge of the support classification. Projected penalty ascent
/// (quadratic shortfall penalty, weight x10 every 100 iterations, step
/// 1/sqrt(iter)) discovers promising supports; each support is then resolved
/// exactly by the bordered stationarity system restricted to it. For q <= 4
/// every support is additionally swept exhaustively, which makes the result
/// independent of the ascent trajectory. Deterministic for a fixed seed.
/// Feasibility is never relaxed: only vectors meeting the constraints are
/// scored. Throws for q > 5, q < 1, or s outside (1, q].
double brute_opt(int q, double s, int restarts, int iters, std::uint64_t seed);

/// Expands a stationary point into a concrete weight vector, assigning
/// colors to parts in ascending runs (part 1 takes the lowest colors).
colorsets::WeightVector to_weight_vector(const StationaryPoint& p);

std::string to_json_string(const StationaryPoint& p);
std::string to_json_string(const SolveReport& r);

}  // namespace chromopt::kkt
