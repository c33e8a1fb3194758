#pragma once

// Concrete graph constructions and exact proper-coloring counts.

#include <boost/multiprecision/cpp_int.hpp>

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "chromopt/colorsets.hpp"

namespace chromopt::graphs {

using BigInt = boost::multiprecision::cpp_int;

/// Simple undirected graph; edges are stored sorted with u < v and no
/// duplicates or loops.
struct ColoredGraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;

    explicit ColoredGraph(int n = 0);
    /// Throws on loops, out-of-range endpoints, or duplicate edges.
    void add_edge(int u, int v);
    bool has_edge(int u, int v) const;
    long long edge_count() const { return static_cast<long long>(edges.size()); }
};

/// Balanced complete s-partite graph on n vertices: n mod s parts of size
/// ceil(n/s) first, then parts of size floor(n/s), on contiguous vertex
/// blocks. Throws for s < 1 or n < s or n > 10000.
ColoredGraph build_turan(int n, int s);

/// Cluster sizes used by build_g_alpha: one cluster per support entry of v
/// (ascending mask), sized by largest-remainder rounding of weight * n so
/// that each size differs from weight * n by less than 1 and the total is
/// exactly n. Remainder ties are broken by ascending mask. Requires
/// |vsum(v) - 1| <= 1e-6.
std::vector<int> g_alpha_part_sizes(const colorsets::WeightVector& v, int n);

/// Blow-up of a weight vector: clusters as in g_alpha_part_sizes, with a
/// complete join between every two clusters whose sets are disjoint.
ColoredGraph build_g_alpha(const colorsets::WeightVector& v, int n);

enum class CountMethod { kBrute, kDeletionContraction, kMultipartite };

struct CountResult {
    BigInt count;
    int n = 0;
    int q = 0;
    CountMethod method = CountMethod::kBrute;
};

/// Exact count of proper q-colorings by exhaustive search. Throws when
/// q^n > 1e8 or q < 1.
CountResult count_colorings_brute(const ColoredGraph& g, int q);

/// Exact count by deletion-contraction with memoization on canonicalized
/// graphs. Throws for n > 18, more than 60 edges, or q < 1; throws
/// std::runtime_error when the node budget is exhausted (explicit failure,
/// never a wrong answer).
CountResult count_colorings_dc(const ColoredGraph& g, int q);

/// Exact count of proper q-colorings of the complete multipartite graph with
/// the given part sizes, via the distinct-color-count expansion
///   sum over (t_i)  prod_i S2(n_i, t_i) * fallingFactorial(q, sum t_i).
/// Returns 0 (not an error) when q is too small. Throws when the sizes sum
/// exceeds 400, a size is negative, or q > 64 or q < 1.
CountResult count_colorings_multipartite(const std::vector<int>& part_sizes, int q);

/// ln(count)/n for the complete multipartite graph; kNegInfRate when the
/// count is zero. Throws when part sizes sum to zero.
double log_rate(const std::vector<int>& part_sizes, int q);

inline constexpr double kNegInfRate = -std::numeric_limits<double>::infinity();

/// Natural log of a positive big integer (exact to double precision).
double log_of_bigint(const BigInt& x);

/// Size of the symmetric difference of the edge sets. Requires equal vertex
/// counts.
int edit_distance_labeled(const ColoredGraph& a, const ColoredGraph& b);

/// Minimum labeled distance over all relabelings of `a`. Requires equal
/// vertex counts and n <= 8.
int edit_distance_iso(const ColoredGraph& a, const ColoredGraph& b);

/// Text format: "n m" on the first line, then m lines "u v" with
/// 0 <= u < v < n. Throws std::invalid_argument on malformed input.
ColoredGraph parse_graph(std::istream& in);
void write_graph(const ColoredGraph& g, std::ostream& out);

std::string to_json_string(const CountResult& r);

}  // namespace chromopt::graphs
