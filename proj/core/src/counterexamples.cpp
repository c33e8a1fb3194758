#include "chromopt/counterexamples.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json_util.hpp"

namespace chromopt::counterexamples {

namespace {

// Part sizes of the balanced s-class split of q, larger first.
std::vector<int> balanced_sizes(int q, int s) {
    const int big = (q + s - 1) / s;
    const int small = q / s;
    const int nbig = q % s;
    std::vector<int> sizes;
    sizes.insert(sizes.end(), nbig, big);
    sizes.insert(sizes.end(), s - nbig, small);
    return sizes;
}

}  // namespace

colorsets::WeightVector balanced_vector(int q, int s) {
    if (s < 1) throw std::invalid_argument("balanced_vector: s must be positive");
    if (q < s) throw std::invalid_argument("balanced_vector: q must be at least s");
    colorsets::WeightVector v(q);  // enforces q <= 30
    int next = 0;
    for (int sz : balanced_sizes(q, s)) {
        std::uint32_t mask = 0;
        for (int i = 0; i < sz; ++i) mask |= 1u << (next + i);
        v.set(mask, 1.0 / s);
        next += sz;
    }
    return v;
}

double balanced_lower_bound(int q, int s) {
    if (s < 1 || q < s) throw std::invalid_argument("balanced_lower_bound: need q >= s >= 1");
    const double qd = q, sd = s;
    return std::log(qd) - std::log(sd) - sd * sd / (2.0 * qd * qd);
}

namespace {

struct FamilyMoments {
    double s1 = 0.0;   // mean of log sizes over the s+1 parts
    double s2 = 0.0;   // mean square of log sizes
    double x = 0.0;    // balanced objective
    double y = 0.0;    // family objective
    double alpha_min = 0.0;
    double alpha_max = 0.0;
};

// Closed-form moments for sizes: (r-1) parts of t+1, (s-r+1) parts of t, one 1.
FamilyMoments family_moments(int s, long long t, int r) {
    FamilyMoments fm;
    const double lt1 = std::log(static_cast<double>(t + 1));
    const double lt = std::log(static_cast<double>(t));
    const int k = s + 1;
    fm.s1 = ((r - 1) * lt1 + (s - r + 1) * lt) / k;
    fm.s2 = ((r - 1) * lt1 * lt1 + (s - r + 1) * lt * lt) / k;
    const double var = std::max(0.0, fm.s2 - fm.s1 * fm.s1);
    fm.x = (static_cast<double>(r) / s) * lt1 + (static_cast<double>(s - r) / s) * lt;
    fm.y = fm.s1 + std::sqrt(var / s);
    const double scale = (k) * std::sqrt(s * var);
    fm.alpha_min = (0.0 - fm.s1) / scale + 1.0 / k;          // singleton part
    fm.alpha_max = (lt1 - fm.s1) / scale + 1.0 / k;
    return fm;
}

bool hypothesis_window(int s, long long t, int r) {
    if (t < 2) return false;
    const double lt = std::log(static_cast<double>(t));
    const double lower = 50.0 * t * lt;
    const double upper = std::min(s / 2.0, 1.5 * t * t * lt * lt);
    return lower <= static_cast<double>(r) && static_cast<double>(r) <= upper;
}

}  // namespace

CounterexampleReport construct_counterexample(int s, int t, int r) {
    if (t < 2) throw std::invalid_argument("construct_counterexample: t must be at least 2");
    if (r <= 0 || r >= s) {
        throw std::invalid_argument("construct_counterexample: r must lie strictly between 0 and s");
    }

    CounterexampleReport rep;
    rep.s = s;
    rep.t = t;
    rep.r = r;
    rep.q = static_cast<long long>(s) * t + r;

    const int k = s + 1;
    rep.sizes.insert(rep.sizes.end(), r - 1, t + 1);
    rep.sizes.insert(rep.sizes.end(), s - r + 1, t);
    rep.sizes.push_back(1);

    const FamilyMoments fm = family_moments(s, t, r);
    rep.X = fm.x;
    rep.Y = fm.y;
    rep.margin = fm.y - fm.x;

    const double var = std::max(0.0, fm.s2 - fm.s1 * fm.s1);
    const double scale = k * std::sqrt(s * var);
    rep.alphas.reserve(k);
    double vs = 0.0, sq = 0.0;
    for (int sz : rep.sizes) {
        const double a = (std::log(static_cast<double>(sz)) - fm.s1) / scale + 1.0 / k;
        rep.alphas.push_back(a);
        vs += a;
        sq += a * a;
    }
    rep.vsum_residual = vs - 1.0;
    rep.sqsum_residual = sq - 1.0 / s;
    rep.alphas_nonneg =
        *std::min_element(rep.alphas.begin(), rep.alphas.end()) >= -1e-12;
    rep.hypothesis_ok = hypothesis_window(s, t, r);
    rep.margin_ok = rep.margin >= kMarginFloor;
    rep.valid = rep.hypothesis_ok && rep.margin_ok && rep.alphas_nonneg;
    return rep;
}

colorsets::WeightVector q13_vector() {
    colorsets::WeightVector v(13);
    const double root5 = std::sqrt(5.0);
    const double w2 = 1.0 / 11.0 + 3.0 * root5 / 110.0;
    const double w1 = 1.0 / 11.0 - root5 / 165.0;
    v.set(0b11u, w2);          // {1,2}
    v.set(0b1100u, w2);        // {3,4}
    for (int c = 5; c <= 13; ++c) v.set(1u << (c - 1), w1);
    return v;
}

std::optional<colorsets::WeightVector> embed_counterexample(int s, int q) {
    if (s < 10) throw std::invalid_argument("embed_counterexample: s must be at least 10");
    if (q < s) throw std::invalid_argument("embed_counterexample: q must be at least s");
    if (q > colorsets::kMaxColors) {
        throw std::invalid_argument("embed_counterexample: q must be at most 30");
    }
    const std::vector<int> sizes = balanced_sizes(q, s);
    const int pairs = static_cast<int>(std::count(sizes.begin(), sizes.end(), 2));
    const int singles = static_cast<int>(std::count(sizes.begin(), sizes.end(), 1));
    // The rewrite needs a 10-class sub-block of three 2-classes and seven
    // singletons, and no class larger than 2.
    if (pairs + singles != s || pairs < 3 || singles < 7) return std::nullopt;

    const colorsets::WeightVector sub = q13_vector();
    const double scale = 10.0 / s;

    colorsets::WeightVector v(q);
    // Colors of the replaced block: the first three 2-classes and the first
    // seven singletons of the balanced layout.
    std::vector<int> block_colors;
    int next = 0;
    std::vector<std::pair<std::uint32_t, int>> kept;  // untouched classes
    int pairs_taken = 0, singles_taken = 0;
    for (int sz : sizes) {
        std::uint32_t mask = 0;
        for (int i = 0; i < sz; ++i) mask |= 1u << (next + i);
        const bool take = (sz == 2 && pairs_taken < 3) || (sz == 1 && singles_taken < 7);
        if (take) {
            for (int i = 0; i < sz; ++i) block_colors.push_back(next + i + 1);
            (sz == 2 ? pairs_taken : singles_taken)++;
        } else {
            kept.push_back({mask, sz});
        }
        next += sz;
    }

    // Map the 13 colors of the sub-vector onto the block colors in order.
    for (const auto& [mask, w] : sub.entries()) {
        std::uint32_t target = 0;
        for (int c = 1; c <= 13; ++c) {
            if ((mask >> (c - 1)) & 1u) target |= 1u << (block_colors[c - 1] - 1);
        }
        v.set(target, scale * w);
    }
    for (const auto& [mask, sz] : kept) {
        (void)sz;
        v.set(mask, 1.0 / s);
    }
    return v;
}

std::vector<long long> scan_counterexamples(int s, long long q0, ScanMode mode) {
    if (s < 2) throw std::invalid_argument("scan_counterexamples: s must be at least 2");
    if (q0 < 1) throw std::invalid_argument("scan_counterexamples: q0 must be positive");
    std::vector<long long> hits;
    for (long long q = std::max(1ll, q0 - s); q <= q0 + s; ++q) {
        const long long t = q / s;
        const int r = static_cast<int>(q % s);
        if (r == 0 || t < 2) continue;
        bool hit = false;
        if (mode == ScanMode::kHypothesis) {
            hit = hypothesis_window(s, t, r);
        } else {
            const FamilyMoments fm = family_moments(s, t, r);
            hit = (fm.y - fm.x >= kMarginFloor) && fm.alpha_min >= -1e-12;
        }
        if (hit) hits.push_back(q);
    }
    return hits;
}

std::string to_json_string(const CounterexampleReport& r) {
    nlohmann::ordered_json j;
    j["s"] = r.s;
    j["t"] = r.t;
    j["r"] = r.r;
    j["q"] = r.q;
    j["X"] = json_num(r.X);
    j["Y"] = json_num(r.Y);
    j["margin"] = json_num(r.margin);
    j["sizes"] = r.sizes;
    nlohmann::ordered_json alphas = nlohmann::ordered_json::array();
    for (double a : r.alphas) alphas.push_back(json_num(a));
    j["alphas"] = std::move(alphas);
    j["hypothesis_ok"] = r.hypothesis_ok;
    j["margin_ok"] = r.margin_ok;
    j["alphas_nonneg"] = r.alphas_nonneg;
    j["vsum_residual"] = json_num(r.vsum_residual);
    j["sqsum_residual"] = json_num(r.sqsum_residual);
    j["valid"] = r.valid;
    return j.dump();
}

}  // namespace chromopt::counterexamples
