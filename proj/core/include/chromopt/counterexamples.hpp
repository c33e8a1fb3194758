#pragma once

// Families of weight vectors that beat the balanced construction, and scans
// for parameters where they do.

#include <optional>
#include <string>
#include <vector>

#include "chromopt/colorsets.hpp"

namespace chromopt::counterexamples {

/// Balanced vector: a partition of [q] into s classes of sizes ceil(q/s) and
/// floor(q/s) (larger classes first, colors in ascending runs), each with
/// weight 1/s. Throws for s < 1 or q < s or q > 30.
colorsets::WeightVector balanced_vector(int q, int s);

/// ln q - ln s - s^2 / (2 q^2); lower bound on the balanced objective.
double balanced_lower_bound(int q, int s);

/// A reported margin below this floor is treated as numerically unreliable.
inline constexpr double kMarginFloor = 1e-12;

struct CounterexampleReport {
    int s = 0, t = 0, r = 0;
    long long q = 0;  // q = s*t + r
    /// Objective of the balanced s-class vector.
    double X = 0.0;
    /// Objective of the (s+1)-part family below.
    double Y = 0.0;
    double margin = 0.0;  // Y - X
    /// s+1 part sizes: r-1 of (t+1), s-r+1 of t, one singleton.
    std::vector<int> sizes;
    /// One weight per part, same order as sizes.
    std::vector<double> alphas;
    bool hypothesis_ok = false;  // t >= 2, 50 t ln t <= r <= min(s/2, (3/2) t^2 ln^2 t)
    bool margin_ok = false;      // margin >= kMarginFloor
    bool alphas_nonneg = false;
    double vsum_residual = 0.0;   // sum alphas - 1
    double sqsum_residual = 0.0;  // sum alphas^2 - 1/s
    bool valid = false;           // hypothesis_ok && margin_ok && alphas_nonneg
};

/// Builds the (s+1)-part family for q = s*t + r and compares it against the
/// balanced s-class vector. The parameter-window check and the numeric
/// comparison are carried independently in the report. Throws for t < 2,
/// r <= 0, or r >= s.
CounterexampleReport construct_counterexample(int s, int t, int r);

/// The explicit 13-color vector on 11 classes: {1,2} and {3,4} with weight
/// 1/11 + 3*sqrt(5)/110, and nine singletons with weight 1/11 - sqrt(5)/165.
colorsets::WeightVector q13_vector();

/// Replaces a 10-class balanced sub-block (three 2-classes and seven
/// singletons) of the balanced (q, s) vector by the scaled 13-color vector.
/// Requires s >= 10 and s <= q <= 30 (throws otherwise); returns nothing
/// when the balanced vector lacks the required size pattern, which holds
/// exactly for s + 3 <= q <= 2s - 7.
std::optional<colorsets::WeightVector> embed_counterexample(int s, int q);

enum class ScanMode {
    kHypothesis,  // parameter window of the family theorem
    kNumeric,     // direct Y > X comparison with nonnegative weights
};

/// Scans q in [q0 - s, q0 + s] for values q = s*t + r (0 < r < s, t >= 2)
/// whose (t, r) pair passes the selected check. Ascending. Throws for s < 2
/// or q0 < 1.
std::vector<long long> scan_counterexamples(int s, long long q0,
                                            ScanMode mode = ScanMode::kHypothesis);

std::string to_json_string(const CounterexampleReport& r);

}  // namespace chromopt::counterexamples
