#include "chromopt/colorsets.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "chromopt/format.hpp"
#include "json_util.hpp"

namespace chromopt::colorsets {

int ColorSet::size() const { return std::popcount(mask); }

bool ColorSet::contains(int color) const {
    return color >= 1 && color <= q && (mask >> (color - 1)) & 1u;
}

std::vector<int> ColorSet::colors() const {
    std::vector<int> out;
    for (int c = 1; c <= q; ++c) {
        if ((mask >> (c - 1)) & 1u) out.push_back(c);
    }
    return out;
}

WeightVector::WeightVector(int q) : q_(q) {
    if (q < 1 || q > kMaxColors) {
        throw std::invalid_argument("WeightVector: q must be in [1, 30]");
    }
}

void WeightVector::set(std::uint32_t mask, double weight) {
    if (mask == 0 && weight != 0.0) {
        throw std::invalid_argument("WeightVector: empty set cannot carry weight");
    }
    if ((mask & ~universe_mask()) != 0) {
        throw std::invalid_argument("WeightVector: set outside the color universe");
    }
    auto it = std::lower_bound(entries_.begin(), entries_.end(), mask,
                               [](const auto& e, std::uint32_t m) { return e.first < m; });
    if (it != entries_.end() && it->first == mask) {
        if (weight == 0.0) {
            entries_.erase(it);
        } else {
            it->second = weight;
        }
        return;
    }
    if (weight != 0.0) entries_.insert(it, {mask, weight});
}

double WeightVector::get(std::uint32_t mask) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), mask,
                               [](const auto& e, std::uint32_t m) { return e.first < m; });
    return (it != entries_.end() && it->first == mask) ? it->second : 0.0;
}

double obj(const WeightVector& v) {
    double sum = 0.0;
    for (const auto& [mask, w] : v.entries()) {
        sum += w * std::log(static_cast<double>(std::popcount(mask)));
    }
    return sum;
}

double vsum(const WeightVector& v) {
    double sum = 0.0;
    for (const auto& [mask, w] : v.entries()) sum += w;
    return sum;
}

double esum(const WeightVector& v) {
    const auto& es = v.entries();
    double sum = 0.0;
    for (size_t i = 0; i < es.size(); ++i) {
        for (size_t j = i + 1; j < es.size(); ++j) {
            if ((es[i].first & es[j].first) == 0) sum += es[i].second * es[j].second;
        }
    }
    return sum;
}

Feasibility feasible(const WeightVector& v, double s, double tol) {
    if (!(s > 1.0)) throw std::invalid_argument("feasible: s must exceed 1");
    Feasibility f;
    f.min_weight = 0.0;
    bool first = true;
    for (const auto& [mask, w] : v.entries()) {
        if (first || w < f.min_weight) f.min_weight = w;
        first = false;
    }
    f.vsum_residual = vsum(v) - 1.0;
    f.esum_slack = esum(v) - (s - 1.0) / (2.0 * s);
    f.feasible = f.min_weight >= -tol && std::fabs(f.vsum_residual) <= tol &&
                 f.esum_slack >= -tol;
    return f;
}

SupportGraph support_graph(const WeightVector& v, double eps) {
    SupportGraph g;
    for (const auto& [mask, w] : v.entries()) {
        if (w < eps) continue;  // below the support threshold, treated as zero
        g.vertices.push_back(ColorSet{mask, v.q()});
    }
    const int n = g.size();
    g.adjacency.assign(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            bool disj = g.vertices[i].disjoint_from(g.vertices[j]);
            g.adjacency[i][j] = disj;
            g.adjacency[j][i] = disj;
        }
    }
    return g;
}

namespace {

// True when the masks indexed by `pick` are pairwise disjoint and tile the
// universe.
bool tiles_universe(const std::vector<ColorSet>& vs, const std::vector<int>& pick,
                    std::uint32_t full) {
    std::uint32_t seen = 0;
    for (int i : pick) {
        if ((seen & vs[i].mask) != 0) return false;
        seen |= vs[i].mask;
    }
    return seen == full;
}

}  // namespace

SupportClass classify_support(const SupportGraph& g) {
    const int n = g.size();
    if (n == 0) return {SupportClass::Tag::kOther, 0};
    const int q = g.vertices[0].q;
    const std::uint32_t full = (q >= 32) ? ~0u : ((1u << q) - 1u);

    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    if (tiles_universe(g.vertices, all, full)) return {SupportClass::Tag::kPartition, n};

    // One set may be the union of exactly two parts of a partition formed by
    // the others.
    for (int x = 0; x < n; ++x) {
        std::vector<int> rest;
        rest.reserve(n - 1);
        for (int i = 0; i < n; ++i) {
            if (i != x) rest.push_back(i);
        }
        if (rest.size() < 2 || !tiles_universe(g.vertices, rest, full)) continue;
        for (size_t a = 0; a < rest.size(); ++a) {
            for (size_t b = a + 1; b < rest.size(); ++b) {
                if ((g.vertices[rest[a]].mask | g.vertices[rest[b]].mask) ==
                    g.vertices[x].mask) {
                    return {SupportClass::Tag::kNearPartition, n - 1};
                }
            }
        }
    }
    return {SupportClass::Tag::kOther, 0};
}

std::string to_json_string(const WeightVector& v) {
    nlohmann::ordered_json j;
    j["q"] = v.q();
    auto& arr = j["entries"] = nlohmann::ordered_json::array();
    for (const auto& [mask, w] : v.entries()) {
        nlohmann::ordered_json e;
        e["set"] = ColorSet{mask, v.q()}.colors();
        e["weight"] = round_sig12(w);
        arr.push_back(std::move(e));
    }
    return j.dump();
}

WeightVector weight_vector_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("weight vector JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("q") || !j.contains("entries") ||
        !j["q"].is_number_integer() || !j["entries"].is_array()) {
        throw std::invalid_argument("weight vector JSON: expected {q, entries}");
    }
    const int q = j["q"].get<int>();
    if (q < 1 || q > kMaxColors) {
        throw std::invalid_argument("weight vector JSON: q out of range");
    }
    WeightVector v(q);
    for (const auto& e : j["entries"]) {
        if (!e.is_object() || !e.contains("set") || !e.contains("weight") ||
            !e["set"].is_array() || !e["weight"].is_number()) {
            throw std::invalid_argument("weight vector JSON: bad entry");
        }
        std::uint32_t mask = 0;
        for (const auto& c : e["set"]) {
            if (!c.is_number_integer()) {
                throw std::invalid_argument("weight vector JSON: non-integer color");
            }
            const int color = c.get<int>();
            if (color < 1 || color > q) {
                throw std::invalid_argument("weight vector JSON: color out of range");
            }
            const std::uint32_t bit = 1u << (color - 1);
            if (mask & bit) {
                throw std::invalid_argument("weight vector JSON: repeated color in set");
            }
            mask |= bit;
        }
        if (mask == 0) throw std::invalid_argument("weight vector JSON: empty set");
        if (v.get(mask) != 0.0) {
            throw std::invalid_argument("weight vector JSON: duplicate set");
        }
        v.set(mask, e["weight"].get<double>());
    }
    return v;
}

}  // namespace chromopt::colorsets
