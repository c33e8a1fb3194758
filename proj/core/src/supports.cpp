#include "chromopt/supports.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

#include "json_util.hpp"

namespace chromopt::supports {

int SizedCandidate::universe() const {
    return std::accumulate(sizes.begin(), sizes.end(), 0);
}

namespace {

void check_qk(int q, int k) {
    if (q < 1 || q > colorsets::kMaxColors) {
        throw std::invalid_argument("candidate enumeration: q must be in [1, 30]");
    }
    if (k < 1 || k > q) {
        throw std::invalid_argument("candidate enumeration: k must be in [1, q]");
    }
}

// Partitions of q into exactly k parts, each <= cap, emitted as nonincreasing
// vectors in ascending lexicographic order.
void emit_partitions(int q, int k, int cap, std::vector<int>& acc,
                     const std::function<void(const std::vector<int>&)>& sink) {
    if (k == 1) {
        if (q >= 1 && q <= cap) {
            acc.push_back(q);
            sink(acc);
            acc.pop_back();
        }
        return;
    }
    // First part a; the rest must fit into k-1 parts each <= a.
    const int lo = (q + k - 1) / k;
    const int hi = std::min(cap, q - (k - 1));
    for (int a = lo; a <= hi; ++a) {
        acc.push_back(a);
        emit_partitions(q - a, k - 1, a, acc, sink);
        acc.pop_back();
    }
}

}  // namespace

std::vector<SizedCandidate> enum_p_candidates(int q, int k) {
    check_qk(q, k);
    std::vector<SizedCandidate> out;
    std::vector<int> acc;
    emit_partitions(q, k, q, acc, [&](const std::vector<int>& head) {
        // `head` holds the parts in nondecreasing emission order of the first
        // element; the recursion keeps them nonincreasing already.
        out.push_back(SizedCandidate{SizedCandidate::Kind::kP, head});
    });
    return out;
}

std::vector<SizedCandidate> enum_q_candidates(int q, int k) {
    check_qk(q, k);
    std::vector<SizedCandidate> out;
    if (k < 2) return out;
    for (const auto& p : enum_p_candidates(q, k)) {
        // Distinct unordered pairs of part sizes present in the multiset.
        std::set<std::pair<int, int>, std::greater<>> pairs;
        for (size_t i = 0; i < p.sizes.size(); ++i) {
            for (size_t j = i + 1; j < p.sizes.size(); ++j) {
                pairs.insert({std::max(p.sizes[i], p.sizes[j]),
                              std::min(p.sizes[i], p.sizes[j])});
            }
        }
        for (const auto& [a, b] : pairs) {
            SizedCandidate c;
            c.kind = SizedCandidate::Kind::kQ;
            c.sizes = {a, b};
            std::vector<int> rest = p.sizes;
            rest.erase(std::find(rest.begin(), rest.end(), a));
            rest.erase(std::find(rest.begin(), rest.end(), b));
            std::sort(rest.begin(), rest.end(), std::greater<>());
            c.sizes.insert(c.sizes.end(), rest.begin(), rest.end());
            out.push_back(std::move(c));
        }
    }
    return out;
}

std::string to_json_string(const SizedCandidate& c) {
    nlohmann::ordered_json j;
    j["kind"] = (c.kind == SizedCandidate::Kind::kP) ? "P" : "Q";
    j["sizes"] = c.sizes;
    if (c.kind == SizedCandidate::Kind::kQ) j["merged"] = {1, 2};
    return j.dump();
}

SmallGraph SmallGraph::empty(int n) {
    SmallGraph g;
    g.n = n;
    g.adj.assign(n, std::vector<bool>(n, false));
    return g;
}

SmallGraph SmallGraph::complete(int n) {
    SmallGraph g = empty(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
    }
    return g;
}

SmallGraph SmallGraph::cycle(int n) {
    SmallGraph g = empty(n);
    if (n == 1) return g;
    if (n == 2) {
        g.add_edge(0, 1);
        return g;
    }
    for (int i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n);
    return g;
}

SmallGraph SmallGraph::path(int n) {
    SmallGraph g = empty(n);
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    return g;
}

SmallGraph SmallGraph::cycle5_plus_chord() {
    SmallGraph g = cycle(5);
    g.add_edge(0, 2);
    return g;
}

void SmallGraph::add_edge(int u, int v) {
    if (u == v || u < 0 || v < 0 || u >= n || v >= n) {
        throw std::invalid_argument("SmallGraph: bad edge");
    }
    adj[u][v] = true;
    adj[v][u] = true;
}

std::vector<double> eigenvalues(const SmallGraph& g) {
    if (g.n < 1 || g.n > 12) {
        throw std::invalid_argument("eigenvalues: vertex count must be in [1, 12]");
    }
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(g.n, g.n);
    for (int i = 0; i < g.n; ++i) {
        for (int j = 0; j < g.n; ++j) {
            if (g.adj[i][j]) a(i, j) = 1.0;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigenvalues: decomposition failed");
    }
    std::vector<double> out(solver.eigenvalues().data(),
                            solver.eigenvalues().data() + g.n);
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

int count_nonneg_eigenvalues(const SmallGraph& g, double eps) {
    int count = 0;
    for (double ev : eigenvalues(g)) {
        if (ev >= -eps) ++count;
    }
    return count;
}

namespace {

// Backtracking search for an induced embedding of `pattern` into a host
// given by an adjacency callback. Both adjacency and non-adjacency must be
// preserved.
bool induced_search(const SmallGraph& pattern, int host_n,
                    const std::function<bool(int, int)>& host_adj) {
    if (pattern.n > 6) {
        throw std::invalid_argument("has_induced: pattern limited to 6 vertices");
    }
    if (pattern.n > host_n) {
        throw std::invalid_argument("has_induced: pattern larger than host");
    }
    std::vector<int> map(pattern.n, -1);
    std::vector<bool> used(host_n, false);
    std::function<bool(int)> place = [&](int i) {
        if (i == pattern.n) return true;
        for (int v = 0; v < host_n; ++v) {
            if (used[v]) continue;
            bool ok = true;
            for (int j = 0; j < i; ++j) {
                if (pattern.adj[i][j] != host_adj(map[j], v)) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            map[i] = v;
            used[v] = true;
            if (place(i + 1)) return true;
            used[v] = false;
            map[i] = -1;
        }
        return false;
    };
    return place(0);
}

}  // namespace

bool has_induced(const SmallGraph& pattern, const SmallGraph& host) {
    return induced_search(pattern, host.n,
                          [&](int u, int v) { return host.adj[u][v]; });
}

bool has_induced(const SmallGraph& pattern, const colorsets::SupportGraph& host) {
    return induced_search(pattern, host.size(),
                          [&](int u, int v) { return host.adjacent(u, v); });
}

}  // namespace chromopt::supports
