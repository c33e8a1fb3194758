#pragma once

// Weighted families of color sets and the quantities the optimizer is built
// from: the weighted log-size objective, the total weight, and the weight
// mass on disjoint pairs.

#include <cstdint>
#include <string>
#include <vector>

namespace chromopt::colorsets {

inline constexpr int kMaxColors = 30;

// Weights strictly below this are treated as exactly zero when a support is
// extracted.
inline constexpr double kSupportEps = 1e-12;

inline constexpr double kDefaultTol = 1e-9;

/// Nonempty subset of the color universe {1, ..., q}. Bit i-1 of `mask`
/// represents color i.
struct ColorSet {
    std::uint32_t mask = 0;
    int q = 0;

    int size() const;
    bool contains(int color) const;
    bool disjoint_from(const ColorSet& other) const { return (mask & other.mask) == 0; }
    /// Member colors, ascending, 1-based.
    std::vector<int> colors() const;
};

/// Sparse map from color sets over a fixed universe to real weights.
/// Entries are kept sorted by ascending mask; a weight of exactly zero
/// removes the entry. The empty set is never admitted with nonzero weight.
class WeightVector {
  public:
    explicit WeightVector(int q);

    int q() const { return q_; }
    std::uint32_t universe_mask() const { return (q_ >= 32) ? ~0u : ((1u << q_) - 1u); }

    /// Sets the weight of `mask`, replacing any previous value.
    /// Throws std::invalid_argument for the empty set (with nonzero weight)
    /// or a set outside the universe. Negative weights are stored as given;
    /// feasibility is judged separately by feasible().
    void set(std::uint32_t mask, double weight);

    double get(std::uint32_t mask) const;

    /// (mask, weight) pairs in ascending mask order.
    const std::vector<std::pair<std::uint32_t, double>>& entries() const { return entries_; }

  private:
    int q_ = 0;
    std::vector<std::pair<std::uint32_t, double>> entries_;
};

/// Sum of weight * ln(set size) over all entries.
double obj(const WeightVector& v);

/// Sum of all weights.
double vsum(const WeightVector& v);

/// Sum of weight products over unordered pairs of distinct disjoint sets.
double esum(const WeightVector& v);

struct Feasibility {
    bool feasible = false;
    double min_weight = 0.0;     // smallest stored weight (0 when nothing is stored)
    double vsum_residual = 0.0;  // vsum - 1
    double esum_slack = 0.0;     // esum - (s-1)/(2s)
};

/// Verdict on the constraint system: all weights >= -tol, |vsum - 1| <= tol,
/// and esum >= (s-1)/(2s) - tol. Throws std::invalid_argument for s <= 1.
Feasibility feasible(const WeightVector& v, double s, double tol = kDefaultTol);

/// Graph on the positively weighted sets of a vector; two sets are adjacent
/// exactly when they are disjoint. Vertices are in ascending mask order.
struct SupportGraph {
    std::vector<ColorSet> vertices;
    std::vector<std::vector<bool>> adjacency;

    int size() const { return static_cast<int>(vertices.size()); }
    bool adjacent(int i, int j) const { return adjacency[i][j]; }
};

SupportGraph support_graph(const WeightVector& v, double eps = kSupportEps);

/// Shape of a support: a k-part partition of the universe, a partition plus
/// the union of exactly two of its parts, or anything else. The test uses
/// actual set unions, not just the adjacency structure.
struct SupportClass {
    enum class Tag { kPartition, kNearPartition, kOther };
    Tag tag = Tag::kOther;
    int k = 0;  // parts of the underlying partition; 0 for kOther
};

SupportClass classify_support(const SupportGraph& g);

/// JSON form: {"q": int, "entries": [{"set": [colors...], "weight": w}, ...]}
/// with each set listed ascending and entries ordered by ascending mask.
std::string to_json_string(const WeightVector& v);

/// Parses the JSON form above. Throws std::invalid_argument on malformed
/// input, duplicate sets, empty sets, or out-of-range colors.
WeightVector weight_vector_from_json(const std::string& text);

}  // namespace chromopt::colorsets
