#pragma once

// Candidate support shapes (partition and near-partition size profiles) and
// small-graph spectral helpers used to screen support graphs.

#include <string>
#include <vector>

#include "chromopt/colorsets.hpp"

namespace chromopt::supports {

/// A support shape reduced to part sizes.
///
/// kP: sizes of a k-part partition, nonincreasing.
/// kQ: a k-part partition together with the union of two designated parts;
///     the merged pair occupies positions 0 and 1 (larger first) and the
///     remaining sizes are nonincreasing.
struct SizedCandidate {
    enum class Kind { kP, kQ };
    Kind kind = Kind::kP;
    std::vector<int> sizes;

    int parts() const { return static_cast<int>(sizes.size()); }
    int universe() const;
};

/// All partitions of q into exactly k positive parts, as nonincreasing size
/// vectors in ascending lexicographic order. Throws for q < 1, q > 30, or
/// k outside [1, q].
std::vector<SizedCandidate> enum_p_candidates(int q, int k);

/// All near-partition shapes for a k-part partition of q, deduplicated up to
/// symmetry: two shapes are equivalent when the multiset {merged pair sizes}
/// and the multiset of remaining sizes both agree. Empty for k < 2.
std::vector<SizedCandidate> enum_q_candidates(int q, int k);

std::string to_json_string(const SizedCandidate& c);

/// Dense undirected graph on at most 12 vertices.
struct SmallGraph {
    int n = 0;
    std::vector<std::vector<bool>> adj;

    static SmallGraph empty(int n);
    static SmallGraph complete(int n);
    static SmallGraph cycle(int n);
    static SmallGraph path(int n);
    /// The 5-cycle 0-1-2-3-4-0 with the extra chord {0,2}.
    static SmallGraph cycle5_plus_chord();

    void add_edge(int u, int v);
    bool has_edge(int u, int v) const { return adj[u][v]; }
};

/// Adjacency spectrum in nonincreasing order. Throws for n > 12 or n < 1.
std::vector<double> eigenvalues(const SmallGraph& g);

/// Number of eigenvalues >= -eps.
int count_nonneg_eigenvalues(const SmallGraph& g, double eps = 1e-9);

/// True when `host` contains an induced copy of `pattern`. Throws when the
/// pattern has more than 6 vertices or more vertices than the host.
bool has_induced(const SmallGraph& pattern, const SmallGraph& host);
bool has_induced(const SmallGraph& pattern, const colorsets::SupportGraph& host);

}  // namespace chromopt::supports
