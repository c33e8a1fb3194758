#include "chromopt/graphs.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "json_util.hpp"

namespace chromopt::graphs {

ColoredGraph::ColoredGraph(int n_) : n(n_) {
    if (n_ < 0) throw std::invalid_argument("ColoredGraph: negative vertex count");
}

void ColoredGraph::add_edge(int u, int v) {
    if (u == v) throw std::invalid_argument("ColoredGraph: loop edge");
    if (u < 0 || v < 0 || u >= n || v >= n) {
        throw std::invalid_argument("ColoredGraph: endpoint out of range");
    }
    if (u > v) std::swap(u, v);
    const std::pair<int, int> e{u, v};
    auto it = std::lower_bound(edges.begin(), edges.end(), e);
    if (it != edges.end() && *it == e) {
        throw std::invalid_argument("ColoredGraph: duplicate edge");
    }
    edges.insert(it, e);
}

bool ColoredGraph::has_edge(int u, int v) const {
    if (u > v) std::swap(u, v);
    return std::binary_search(edges.begin(), edges.end(), std::pair<int, int>{u, v});
}

namespace {

std::vector<int> balanced_parts(int n, int s) {
    const int big = (n + s - 1) / s;
    const int small = n / s;
    const int nbig = n % s;
    std::vector<int> parts;
    parts.insert(parts.end(), nbig, big);
    parts.insert(parts.end(), s - nbig, small);
    return parts;
}

ColoredGraph join_clusters(const std::vector<int>& sizes,
                           const std::vector<std::pair<int, int>>& joined) {
    const int n = std::accumulate(sizes.begin(), sizes.end(), 0);
    std::vector<int> start(sizes.size() + 1, 0);
    for (size_t i = 0; i < sizes.size(); ++i) start[i + 1] = start[i] + sizes[i];
    ColoredGraph g(n);
    for (const auto& [a, b] : joined) {
        for (int u = start[a]; u < start[a + 1]; ++u) {
            for (int v = start[b]; v < start[b + 1]; ++v) g.add_edge(u, v);
        }
    }
    return g;
}

}  // namespace

ColoredGraph build_turan(int n, int s) {
    if (s < 1) throw std::invalid_argument("build_turan: s must be positive");
    if (n < s) throw std::invalid_argument("build_turan: n must be at least s");
    if (n > 10000) throw std::invalid_argument("build_turan: n limited to 10000");
    const std::vector<int> parts = balanced_parts(n, s);
    std::vector<std::pair<int, int>> joined;
    for (size_t i = 0; i < parts.size(); ++i) {
        for (size_t j = i + 1; j < parts.size(); ++j) {
            joined.push_back({static_cast<int>(i), static_cast<int>(j)});
        }
    }
    return join_clusters(parts, joined);
}

std::vector<int> g_alpha_part_sizes(const colorsets::WeightVector& v, int n) {
    if (n < 1) throw std::invalid_argument("g_alpha_part_sizes: n must be positive");
    if (std::fabs(colorsets::vsum(v) - 1.0) > 1e-6) {
        throw std::invalid_argument("g_alpha_part_sizes: weights must sum to 1");
    }
    std::vector<std::pair<std::uint32_t, double>> support;
    for (const auto& [mask, w] : v.entries()) {
        if (w < colorsets::kSupportEps) continue;
        support.push_back({mask, w});
    }
    if (support.empty()) {
        throw std::invalid_argument("g_alpha_part_sizes: empty support");
    }

    // Largest-remainder rounding of w*n; ties by ascending mask (= position).
    std::vector<int> sizes(support.size());
    std::vector<std::pair<double, size_t>> rema(support.size());
    long long assigned = 0;
    for (size_t i = 0; i < support.size(); ++i) {
        const double target = support[i].second * n;
        sizes[i] = static_cast<int>(std::floor(target));
        assigned += sizes[i];
        rema[i] = {target - sizes[i], i};
    }
    long long deficit = n - assigned;
    std::stable_sort(rema.begin(), rema.end(), [](const auto& a, const auto& b) {
        return a.first > b.first;  // stable: equal remainders stay in mask order
    });
    for (size_t i = 0; deficit > 0 && i < rema.size(); ++i, --deficit) {
        sizes[rema[i].second] += 1;
    }
    if (deficit != 0) {
        throw std::invalid_argument("g_alpha_part_sizes: rounding could not reach n");
    }
    return sizes;
}

ColoredGraph build_g_alpha(const colorsets::WeightVector& v, int n) {
    const std::vector<int> sizes = g_alpha_part_sizes(v, n);
    std::vector<std::uint32_t> masks;
    for (const auto& [mask, w] : v.entries()) {
        if (w < colorsets::kSupportEps) continue;
        masks.push_back(mask);
    }
    std::vector<std::pair<int, int>> joined;
    for (size_t i = 0; i < masks.size(); ++i) {
        for (size_t j = i + 1; j < masks.size(); ++j) {
            if ((masks[i] & masks[j]) == 0) {
                joined.push_back({static_cast<int>(i), static_cast<int>(j)});
            }
        }
    }
    return join_clusters(sizes, joined);
}

CountResult count_colorings_brute(const ColoredGraph& g, int q) {
    if (q < 1) throw std::invalid_argument("count_colorings_brute: q must be positive");
    double work = 1.0;
    for (int i = 0; i < g.n; ++i) {
        work *= q;
        if (work > 1e8) {
            throw std::invalid_argument("count_colorings_brute: q^n exceeds 1e8");
        }
    }

    // Backtracking over vertices in index order; each vertex checks edges to
    // earlier vertices only.
    std::vector<std::vector<int>> back(g.n);
    for (const auto& [u, v] : g.edges) back[v].push_back(u);

    std::vector<int> color(g.n, -1);
    BigInt count = 0;
    // Iterative DFS with an explicit color odometer per depth.
    std::vector<int> next_color(g.n + 1, 0);
    int depth = 0;
    while (depth >= 0) {
        if (depth == g.n) {
            ++count;
            --depth;
            continue;
        }
        bool advanced = false;
        for (int c = next_color[depth]; c < q; ++c) {
            bool ok = true;
            for (int u : back[depth]) {
                if (color[u] == c) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                color[depth] = c;
                next_color[depth] = c + 1;
                ++depth;
                next_color[depth] = 0;
                advanced = true;
                break;
            }
        }
        if (!advanced) {
            color[depth] = -1;
            --depth;
        }
    }
    return {count, g.n, q, CountMethod::kBrute};
}

namespace {

// Adjacency-matrix graph used inside the deletion-contraction recursion.
struct DcGraph {
    int n = 0;
    std::vector<std::uint32_t> adj;  // row bitmask per vertex

    int degree(int v) const { return std::popcount(adj[v]); }
    long long edge_count() const {
        long long total = 0;
        for (int v = 0; v < n; ++v) total += degree(v);
        return total / 2;
    }
};

// Canonical byte key. For n <= 10 the labeling is minimized over
// permutations compatible with iterated degree refinement (capped); larger
// or refinement-heavy graphs fall back to the labeled key.
std::string dc_key(const DcGraph& g) {
    std::string labeled(reinterpret_cast<const char*>(g.adj.data()),
                        g.adj.size() * sizeof(std::uint32_t));
    labeled.push_back(static_cast<char>(g.n));
    if (g.n > 10) return labeled;

    // Iterated refinement: start from degrees, refine by multisets of
    // neighbor classes until stable.
    std::vector<int> cls(g.n);
    for (int v = 0; v < g.n; ++v) cls[v] = g.degree(v);
    for (int round = 0; round < g.n; ++round) {
        std::vector<std::pair<std::vector<int>, int>> sig(g.n);
        for (int v = 0; v < g.n; ++v) {
            std::vector<int> neigh;
            for (int u = 0; u < g.n; ++u) {
                if ((g.adj[v] >> u) & 1u) neigh.push_back(cls[u]);
            }
            std::sort(neigh.begin(), neigh.end());
            neigh.push_back(cls[v]);
            sig[v] = {std::move(neigh), v};
        }
        std::vector<std::pair<std::vector<int>, int>> sorted = sig;
        std::sort(sorted.begin(), sorted.end());
        std::vector<int> next(g.n);
        int c = 0;
        for (int i = 0; i < g.n; ++i) {
            if (i > 0 && sorted[i].first != sorted[i - 1].first) ++c;
            next[sorted[i].second] = c;
        }
        if (next == cls) break;
        cls = next;
    }

    // Vertices grouped by class; permutations permute within classes only.
    std::vector<std::vector<int>> groups;
    {
        std::vector<std::pair<int, int>> order(g.n);
        for (int v = 0; v < g.n; ++v) order[v] = {cls[v], v};
        std::sort(order.begin(), order.end());
        for (int i = 0; i < g.n; ++i) {
            if (i == 0 || order[i].first != order[i - 1].first) groups.emplace_back();
            groups.back().push_back(order[i].second);
        }
    }
    long long perms = 1;
    for (const auto& grp : groups) {
        for (size_t i = 2; i <= grp.size(); ++i) {
            perms *= static_cast<long long>(i);
            if (perms > 5040) return labeled;  // refinement too coarse; keep labeled key
        }
        if (perms > 5040) return labeled;
    }

    std::vector<int> base;
    for (const auto& grp : groups) base.insert(base.end(), grp.begin(), grp.end());

    std::string best;
    std::vector<int> pos(g.n);
    std::vector<int> perm = base;
    // Lexicographic minimum of the upper-triangle bit rows over admissible
    // relabelings: perm[i] = original vertex placed at slot i.
    do {
        for (int i = 0; i < g.n; ++i) pos[perm[i]] = i;
        std::string key(static_cast<size_t>(g.n) * g.n / 8 + 2, '\0');
        int bit = 0;
        for (int i = 0; i < g.n; ++i) {
            for (int j = i + 1; j < g.n; ++j) {
                const bool e = (g.adj[perm[i]] >> perm[j]) & 1u;
                if (e) key[bit / 8] |= static_cast<char>(1 << (bit % 8));
                ++bit;
            }
        }
        key.back() = static_cast<char>(g.n);
        if (best.empty() || key < best) best = key;
        // Advance to the next within-class arrangement.
    } while ([&] {
        for (size_t gi = groups.size(); gi-- > 0;) {
            auto& grp = groups[gi];
            size_t off = 0;
            for (size_t k = 0; k < gi; ++k) off += groups[k].size();
            if (std::next_permutation(perm.begin() + off, perm.begin() + off + grp.size())) {
                return true;
            }
            std::sort(perm.begin() + off, perm.begin() + off + grp.size());
        }
        return false;
    }());
    return best;
}

class DcEngine {
  public:
    DcEngine(int q, long long budget) : q_(q), budget_(budget) {}

    BigInt run(DcGraph g) { return count(std::move(g)); }

  private:
    BigInt falling(int m) const {
        BigInt r = 1;
        for (int i = 0; i < m; ++i) r *= (q_ - i);
        return r;
    }

    BigInt power(int e) const {
        BigInt r = 1;
        for (int i = 0; i < e; ++i) r *= q_;
        return r;
    }

    // Counts proper colorings of one connected component (or any graph; the
    // component split happens inside).
    BigInt count(DcGraph g) {
        if (--budget_ < 0) {
            throw std::runtime_error("count_colorings_dc: node budget exhausted");
        }
        const long long m = g.edge_count();
        if (m == 0) return power(g.n);

        // Split into connected components; isolated vertices contribute q each.
        std::vector<int> comp(g.n, -1);
        int ncomp = 0;
        for (int v = 0; v < g.n; ++v) {
            if (comp[v] >= 0) continue;
            std::vector<int> stack{v};
            comp[v] = ncomp;
            while (!stack.empty()) {
                const int u = stack.back();
                stack.pop_back();
                for (int w = 0; w < g.n; ++w) {
                    if (((g.adj[u] >> w) & 1u) && comp[w] < 0) {
                        comp[w] = ncomp;
                        stack.push_back(w);
                    }
                }
            }
            ++ncomp;
        }
        if (ncomp > 1) {
            BigInt total = 1;
            for (int c = 0; c < ncomp; ++c) {
                std::vector<int> verts;
                for (int v = 0; v < g.n; ++v) {
                    if (comp[v] == c) verts.push_back(v);
                }
                if (verts.size() == 1) {
                    total *= q_;
                    continue;
                }
                DcGraph sub;
                sub.n = static_cast<int>(verts.size());
                sub.adj.assign(sub.n, 0);
                for (int i = 0; i < sub.n; ++i) {
                    for (int j = 0; j < sub.n; ++j) {
                        if ((g.adj[verts[i]] >> verts[j]) & 1u) sub.adj[i] |= 1u << j;
                    }
                }
                total *= connected_count(std::move(sub));
                if (total == 0) return 0;
            }
            return total;
        }
        return connected_count(std::move(g));
    }

    BigInt connected_count(DcGraph g) {
        const long long m = g.edge_count();
        const long long full = static_cast<long long>(g.n) * (g.n - 1) / 2;
        if (m == full) return falling(g.n);        // complete graph
        if (m == g.n - 1) {                        // spanning tree
            BigInt r = q_;
            for (int i = 1; i < g.n; ++i) r *= (q_ - 1);
            return r;
        }

        const std::string key = dc_key(g);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;

        // Pivot edge: the max-degree vertex and its max-degree neighbor.
        int u = 0;
        for (int v = 1; v < g.n; ++v) {
            if (g.degree(v) > g.degree(u)) u = v;
        }
        int v = -1;
        for (int w = 0; w < g.n; ++w) {
            if (((g.adj[u] >> w) & 1u) && (v < 0 || g.degree(w) > g.degree(v))) v = w;
        }

        DcGraph del = g;
        del.adj[u] &= ~(1u << v);
        del.adj[v] &= ~(1u << u);

        // Contract v into u: u absorbs v's neighbors, v is removed.
        DcGraph con;
        con.n = g.n - 1;
        con.adj.assign(con.n, 0);
        auto newid = [&](int w) { return w < v ? w : w - 1; };
        for (int a = 0; a < g.n; ++a) {
            if (a == v) continue;
            for (int b = 0; b < g.n; ++b) {
                if (b == v || !((g.adj[a] >> b) & 1u)) continue;
                con.adj[newid(a)] |= 1u << newid(b);
            }
        }
        const int uu = newid(u);
        for (int b = 0; b < g.n; ++b) {
            if (b == v || b == u || !((g.adj[v] >> b) & 1u)) continue;
            con.adj[uu] |= 1u << newid(b);
            con.adj[newid(b)] |= 1u << uu;
        }

        BigInt result = count(std::move(del)) - count(std::move(con));
        memo_.emplace(key, result);
        return result;
    }

    int q_;
    long long budget_;
    std::map<std::string, BigInt> memo_;
};

}  // namespace

CountResult count_colorings_dc(const ColoredGraph& g, int q) {
    if (q < 1) throw std::invalid_argument("count_colorings_dc: q must be positive");
    if (g.n > 18) throw std::invalid_argument("count_colorings_dc: n limited to 18");
    if (g.edge_count() > 60) {
        throw std::invalid_argument("count_colorings_dc: edge count limited to 60");
    }
    DcGraph dg;
    dg.n = g.n;
    dg.adj.assign(std::max(g.n, 0), 0);
    for (const auto& [u, v] : g.edges) {
        dg.adj[u] |= 1u << v;
        dg.adj[v] |= 1u << u;
    }
    DcEngine engine(q, 5'000'000);
    return {engine.run(std::move(dg)), g.n, q, CountMethod::kDeletionContraction};
}

CountResult count_colorings_multipartite(const std::vector<int>& part_sizes, int q) {
    if (q < 1 || q > 64) {
        throw std::invalid_argument("count_colorings_multipartite: q must be in [1, 64]");
    }
    long long total_n = 0;
    for (int sz : part_sizes) {
        if (sz < 0) {
            throw std::invalid_argument("count_colorings_multipartite: negative part size");
        }
        total_n += sz;
    }
    if (total_n > 400) {
        throw std::invalid_argument("count_colorings_multipartite: sizes sum limited to 400");
    }

    // Stirling numbers of the second kind S2(n, t) for all needed n, t <= q.
    const int max_n = part_sizes.empty()
                          ? 0
                          : *std::max_element(part_sizes.begin(), part_sizes.end());
    std::vector<std::vector<BigInt>> s2(max_n + 1, std::vector<BigInt>(q + 1, 0));
    s2[0][0] = 1;
    for (int nn = 1; nn <= max_n; ++nn) {
        for (int t = 1; t <= q; ++t) {
            s2[nn][t] = t * s2[nn - 1][t] + s2[nn - 1][t - 1];
        }
    }

    // dp[j] = sum over processed parts of products of S2(n_i, t_i) with
    // sum t_i = j; every nonempty part uses at least one color.
    std::vector<BigInt> dp(q + 1, 0);
    dp[0] = 1;
    for (int sz : part_sizes) {
        if (sz == 0) continue;
        std::vector<BigInt> next(q + 1, 0);
        for (int j = 0; j <= q; ++j) {
            if (dp[j] == 0) continue;
            for (int t = 1; t <= std::min(sz, q - j); ++t) {
                next[j + t] += dp[j] * s2[sz][t];
            }
        }
        dp = std::move(next);
    }
    BigInt count = 0;
    BigInt fall = 1;
    for (int j = 0; j <= q; ++j) {
        if (j > 0) fall *= (q - j + 1);
        count += dp[j] * fall;
    }
    CountResult r;
    r.count = count;
    r.n = static_cast<int>(total_n);
    r.q = q;
    r.method = CountMethod::kMultipartite;
    return r;
}

double log_of_bigint(const BigInt& x) {
    if (x <= 0) throw std::invalid_argument("log_of_bigint: argument must be positive");
    const unsigned bits = boost::multiprecision::msb(x) + 1;
    if (bits <= 62) return std::log(x.convert_to<double>());
    const unsigned shift = bits - 62;
    const BigInt top = x >> shift;
    return std::log(top.convert_to<double>()) + shift * std::log(2.0);
}

double log_rate(const std::vector<int>& part_sizes, int q) {
    const CountResult r = count_colorings_multipartite(part_sizes, q);
    if (r.n == 0) throw std::invalid_argument("log_rate: empty graph");
    if (r.count == 0) return kNegInfRate;
    return log_of_bigint(r.count) / r.n;
}

int edit_distance_labeled(const ColoredGraph& a, const ColoredGraph& b) {
    if (a.n != b.n) {
        throw std::invalid_argument("edit_distance_labeled: vertex counts differ");
    }
    int common = 0;
    size_t i = 0, j = 0;
    while (i < a.edges.size() && j < b.edges.size()) {
        if (a.edges[i] == b.edges[j]) {
            ++common;
            ++i;
            ++j;
        } else if (a.edges[i] < b.edges[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return static_cast<int>(a.edges.size() + b.edges.size()) - 2 * common;
}

int edit_distance_iso(const ColoredGraph& a, const ColoredGraph& b) {
    if (a.n != b.n) {
        throw std::invalid_argument("edit_distance_iso: vertex counts differ");
    }
    if (a.n > 8) throw std::invalid_argument("edit_distance_iso: n limited to 8");
    const int n = a.n;
    auto pack = [n](const ColoredGraph& g, const std::vector<int>& relabel) {
        std::uint64_t bits = 0;
        for (const auto& [u, v] : g.edges) {
            int x = relabel.empty() ? u : relabel[u];
            int y = relabel.empty() ? v : relabel[v];
            if (x > y) std::swap(x, y);
            bits |= 1ull << (x * n + y);
        }
        return bits;
    };
    const std::uint64_t bbits = pack(b, {});
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    int best = std::numeric_limits<int>::max();
    do {
        const std::uint64_t abits = pack(a, perm);
        best = std::min(best, std::popcount(abits ^ bbits));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

ColoredGraph parse_graph(std::istream& in) {
    int n = 0;
    long long m = 0;
    if (!(in >> n >> m)) throw std::invalid_argument("graph file: expected 'n m' header");
    if (n < 0 || m < 0) throw std::invalid_argument("graph file: negative header field");
    ColoredGraph g(n);
    for (long long i = 0; i < m; ++i) {
        int u = 0, v = 0;
        if (!(in >> u >> v)) throw std::invalid_argument("graph file: truncated edge list");
        if (u >= v) throw std::invalid_argument("graph file: edges must satisfy u < v");
        g.add_edge(u, v);
    }
    return g;
}

void write_graph(const ColoredGraph& g, std::ostream& out) {
    out << g.n << ' ' << g.edges.size() << '\n';
    for (const auto& [u, v] : g.edges) out << u << ' ' << v << '\n';
}

std::string to_json_string(const CountResult& r) {
    nlohmann::ordered_json j;
    j["n"] = r.n;
    j["q"] = r.q;
    switch (r.method) {
        case CountMethod::kBrute: j["method"] = "brute"; break;
        case CountMethod::kDeletionContraction: j["method"] = "deletion_contraction"; break;
        case CountMethod::kMultipartite: j["method"] = "multipartite"; break;
    }
    j["count"] = r.count.str();
    j["bits"] = (r.count == 0) ? 0 : static_cast<int>(boost::multiprecision::msb(r.count) + 1);
    if (r.count == 0 || r.n == 0) {
        j["log_rate"] = nullptr;
    } else {
        j["log_rate"] = json_num(log_of_bigint(r.count) / r.n);
    }
    return j.dump();
}

}  // namespace chromopt::graphs
