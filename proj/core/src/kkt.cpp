#include "chromopt/kkt.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "json_util.hpp"

namespace chromopt::kkt {

namespace {

bool is_integer(double s) { return s == std::floor(s); }

bool all_nonneg(const std::vector<double>& xs) {
    for (double x : xs) {
        if (x < -kAlphaTol) return false;
    }
    return true;
}

// Two-value solution of (m-1)x + y = 1, (m-1)x^2 + y^2 = 1/s with x >= y.
// Returns false when the system has no real solution with m >= s.
bool two_value(int m, double s, double& x, double& y) {
    if (m < 1 || !(static_cast<double>(m) >= s)) return false;
    if (m == 1) {
        x = y = 1.0;
        return std::fabs(s - 1.0) < 1e-12;
    }
    const double excess = static_cast<double>(m) / s - 1.0;  // >= 0
    const double root = std::sqrt(std::max(0.0, excess / (m - 1)));
    x = 1.0 / m + root / m;
    y = 1.0 / m - std::sqrt(std::max(0.0, excess * (m - 1))) / m;
    return true;
}

}  // namespace

std::optional<StationaryPoint> solve_pk(const supports::SizedCandidate& c, double s) {
    if (c.kind != supports::SizedCandidate::Kind::kP) {
        throw std::invalid_argument("solve_pk: candidate is not a partition shape");
    }
    if (!(s > 1.0)) throw std::invalid_argument("solve_pk: s must exceed 1");
    const int k = c.parts();
    if (k < static_cast<int>(std::ceil(s))) {
        throw std::invalid_argument("solve_pk: fewer parts than ceil(s)");
    }

    StationaryPoint p;
    p.candidate = c;
    p.alphas.resize(k);

    double s1 = 0.0, s2 = 0.0;
    for (int sz : c.sizes) {
        const double l = std::log(static_cast<double>(sz));
        s1 += l;
        s2 += l * l;
    }
    s1 /= k;
    s2 /= k;

    if (static_cast<double>(k) == s) {
        // Weights are forced uniform; the quadratic constraint is tight at 1/k.
        std::fill(p.alphas.begin(), p.alphas.end(), 1.0 / k);
        p.lambda = 0.0;
        p.mu = s1;
        p.objective = s1;
        p.feasible = true;
        return p;
    }

    const double var = std::max(0.0, s2 - s1 * s1);
    if (var == 0.0) {
        // All sizes equal. The objective is size-independent; report the
        // two-value witness with the quadratic constraint active.
        double x = 0.0, y = 0.0;
        if (!two_value(k, s, x, y)) return std::nullopt;
        if (y < -kAlphaTol) return std::nullopt;
        std::fill(p.alphas.begin(), p.alphas.end() - 1, x);
        p.alphas.back() = y;
        p.lambda = 0.0;
        p.mu = s1;
        p.objective = s1;
        p.feasible = true;
        return p;
    }

    const double lambda = k * std::sqrt(s / (k - s) * var);
    const double mu = s1 - lambda / k;
    for (int i = 0; i < k; ++i) {
        p.alphas[i] = (std::log(static_cast<double>(c.sizes[i])) - mu) / lambda;
    }
    if (!all_nonneg(p.alphas)) return std::nullopt;
    p.lambda = lambda;
    p.mu = mu;
    p.objective = mu + lambda / s;
    p.feasible = true;
    return p;
}

std::optional<StationaryPoint> solve_qk(const supports::SizedCandidate& c, double s) {
    if (c.kind != supports::SizedCandidate::Kind::kQ) {
        throw std::invalid_argument("solve_qk: candidate is not a near-partition shape");
    }
    if (!(s > 1.0)) throw std::invalid_argument("solve_qk: s must exceed 1");
    const int k = c.parts();
    if (k < 2) throw std::invalid_argument("solve_qk: needs at least two parts");
    if (static_cast<double>(k - 1) == s) {
        throw std::invalid_argument("solve_qk: k - 1 = s is singular");
    }

    const double a1 = c.sizes[0];
    const double a2 = c.sizes[1];
    const double a12 = a1 + a2;
    // Size of the merged union as it enters the multiplier system:
    // the harmonic combination a1*a2/(a1+a2).
    const double h = a1 * a2 / a12;

    double s1 = std::log(a12);
    double s2 = -std::log(h) * std::log(h);
    for (int i = 2; i < k; ++i) {
        s1 += std::log(static_cast<double>(c.sizes[i]));
    }
    for (int i = 0; i < k; ++i) {
        const double l = std::log(static_cast<double>(c.sizes[i]));
        s2 += l * l;
    }
    s1 /= (k - 1);
    s2 /= (k - 1);

    const double disc = s / (k - 1 - s) * (s2 - s1 * s1);
    if (!(disc > 0.0)) return std::nullopt;

    const double lambda = (k - 1) * std::sqrt(disc);
    const double mu = s1 - lambda / (k - 1);

    StationaryPoint p;
    p.candidate = c;
    p.alphas.resize(k + 1);
    p.alphas[0] = std::log(a12 / a2) / lambda;
    p.alphas[1] = std::log(a12 / a1) / lambda;
    for (int i = 2; i < k; ++i) {
        p.alphas[i] = (std::log(static_cast<double>(c.sizes[i])) - mu) / lambda;
    }
    const double beta = (std::log(h) - mu) / lambda;
    p.alphas[k] = beta;
    if (!all_nonneg(p.alphas) || !(beta > 0.0)) return std::nullopt;
    p.lambda = lambda;
    p.mu = mu;
    p.objective = mu + lambda / s;
    p.feasible = true;
    return p;
}

SolveReport global_solve(int q, double s, bool paranoid) {
    if (q < 1 || q > colorsets::kMaxColors) {
        throw std::invalid_argument("global_solve: q must be in [1, 30]");
    }
    if (!(s > 1.0) || s > static_cast<double>(q)) {
        throw std::invalid_argument("global_solve: s must be in (1, q]");
    }

    SolveReport report;
    report.q = q;
    report.s = s;
    report.paranoid = paranoid;

    const int ks = static_cast<int>(std::ceil(s));
    std::vector<StationaryPoint> found;

    for (int k = ks; k <= q; ++k) {
        if (k == q && ks < q) continue;  // full-singleton shape excluded below the top
        for (const auto& c : supports::enum_p_candidates(q, k)) {
            ++report.candidates_evaluated;
            if (auto p = solve_pk(c, s)) found.push_back(std::move(*p));
        }
    }

    const bool integer_s = is_integer(s);
    const int q_lo = paranoid ? 2 : ks;
    const int q_hi = paranoid ? q : ks;
    if (!integer_s || paranoid) {
        for (int k = std::max(2, q_lo); k <= q_hi; ++k) {
            if (static_cast<double>(k - 1) == s) continue;  // singular shape
            for (const auto& c : supports::enum_q_candidates(q, k)) {
                ++report.candidates_evaluated;
                if (auto p = solve_qk(c, s)) found.push_back(std::move(*p));
            }
        }
    }

    if (found.empty()) {
        throw std::runtime_error("global_solve: no feasible stationary point");
    }

    double best_val = found[0].objective;
    size_t best_at = 0;
    for (size_t i = 1; i < found.size(); ++i) {
        if (found[i].objective > best_val) {
            best_val = found[i].objective;
            best_at = i;
        }
    }
    report.opt_value = best_val;
    report.best = found[best_at];
    for (size_t i = 0; i < found.size(); ++i) {
        if (i != best_at && found[i].objective >= best_val - kTieWindow) {
            report.ties.push_back(found[i]);
        }
    }
    return report;
}

namespace {

struct BruteSpace {
    int q = 0;
    int d = 0;                      // 2^q - 1 coordinates, index = mask - 1
    std::vector<double> logsize;    // ln |A| per coordinate
    std::vector<std::vector<int>> disjoint;  // coordinate -> disjoint coordinates
};

BruteSpace make_space(int q) {
    BruteSpace sp;
    sp.q = q;
    sp.d = (1 << q) - 1;
    sp.logsize.resize(sp.d);
    sp.disjoint.assign(sp.d, {});
    for (int m = 1; m <= sp.d; ++m) {
        sp.logsize[m - 1] = std::log(static_cast<double>(std::popcount(
            static_cast<unsigned>(m))));
        for (int m2 = 1; m2 <= sp.d; ++m2) {
            if (m2 != m && (m & m2) == 0) sp.disjoint[m - 1].push_back(m2 - 1);
        }
    }
    return sp;
}

double pair_mass(const BruteSpace& sp, const std::vector<double>& a) {
    double e = 0.0;
    for (int i = 0; i < sp.d; ++i) {
        double acc = 0.0;
        for (int j : sp.disjoint[i]) acc += a[j];
        e += a[i] * acc;
    }
    return 0.5 * e;
}

double cross_mass(const BruteSpace& sp, const std::vector<double>& a,
                  const std::vector<double>& b) {
    double e = 0.0;
    for (int i = 0; i < sp.d; ++i) {
        double acc = 0.0;
        for (int j : sp.disjoint[i]) acc += b[j];
        e += a[i] * acc;
    }
    return 0.5 * e;
}

void project_simplex(std::vector<double>& a) {
    std::vector<double> z = a;
    std::sort(z.begin(), z.end(), std::greater<>());
    double csum = 0.0, tau = 0.0;
    int rho = 0;
    for (size_t j = 0; j < z.size(); ++j) {
        csum += z[j];
        const double t = (csum - 1.0) / static_cast<double>(j + 1);
        if (z[j] - t > 0.0) {
            rho = static_cast<int>(j + 1);
            tau = t;
        }
    }
    if (rho == 0) {  // all mass collapsed; fall back to uniform
        std::fill(a.begin(), a.end(), 1.0 / a.size());
        return;
    }
    for (double& x : a) x = std::max(0.0, x - tau);
}

double objective_of(const BruteSpace& sp, const std::vector<double>& a) {
    double v = 0.0;
    for (int i = 0; i < sp.d; ++i) v += a[i] * sp.logsize[i];
    return v;
}

// Exact maximizer candidates of the linear objective restricted to one
// support: coordinates in `coords` may be positive, all others are zero,
// subject to sum = 1 and pair mass >= target. Any maximum over the support's
// relative interior either satisfies the two-multiplier stationarity system
// (solved in closed form: mu obeys a scalar quadratic), or sits where the
// pair-mass gradient is parallel to the simplex normal (the tangency point
// M alpha = gamma 1), or involves coordinates with no disjoint partner in
// the support (which carry mass but no pair-mass gradient, forcing
// mu = max of their objective coefficients). Boundary maxima belong to
// sub-supports and are found when those are visited. Feeds every validated
// candidate objective into `best`.
void support_candidates(const BruteSpace& sp, const std::vector<int>& coords,
                        double target, double& best) {
    const int m = static_cast<int>(coords.size());
    if (m < 2) return;

    std::vector<int> rest, iso;
    for (int i = 0; i < m; ++i) {
        bool any = false;
        for (int j = 0; j < m && !any; ++j) {
            const unsigned mi = static_cast<unsigned>(coords[i] + 1);
            const unsigned mj = static_cast<unsigned>(coords[j] + 1);
            any = i != j && (mi & mj) == 0;
        }
        (any ? rest : iso).push_back(coords[i]);
    }
    const int p = static_cast<int>(rest.size());
    if (p < 2) return;

    Eigen::MatrixXd M(p, p);
    Eigen::VectorXd c(p);
    for (int i = 0; i < p; ++i) {
        c(i) = sp.logsize[rest[i]];
        for (int j = 0; j < p; ++j) {
            const unsigned mi = static_cast<unsigned>(rest[i] + 1);
            const unsigned mj = static_cast<unsigned>(rest[j] + 1);
            M(i, j) = (i != j && (mi & mj) == 0) ? 1.0 : 0.0;
        }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    if (!lu.isInvertible()) return;
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(p);
    const Eigen::VectorXd u = lu.solve(ones);
    const Eigen::VectorXd v = lu.solve(c);
    const double A = c.dot(v);
    const double B = ones.dot(v);
    const double C = ones.dot(u);

    double chat = 0.0;
    for (int i : iso) chat = std::max(chat, sp.logsize[i]);

    auto consider = [&](const Eigen::VectorXd& aR, double z) {
        if (!(z >= -1e-12 && z <= 1.0 + 1e-12)) return;
        if (aR.minCoeff() < -1e-12) return;
        if (std::fabs(aR.sum() + z - 1.0) > 1e-9) return;
        const double mass = 0.5 * aR.dot(M * aR);
        if (mass < target - 1e-9) return;
        best = std::max(best, c.dot(aR) + chat * z);
    };

    if (iso.empty()) {
        // Stationarity: c = mu 1 + lambda M alpha, sum alpha = 1,
        // mass = target. Eliminating alpha = (v - mu u)/lambda and
        // lambda = B - mu C leaves a quadratic in mu.
        const double qa = C - 2.0 * target * C * C;
        const double qb = -2.0 * B + 4.0 * target * B * C;
        const double qc = A - 2.0 * target * B * B;
        std::vector<double> mus;
        if (std::fabs(qa) > 1e-14) {
            const double disc = qb * qb - 4.0 * qa * qc;
            if (disc >= 0.0) {
                mus.push_back((-qb - std::sqrt(disc)) / (2.0 * qa));
                mus.push_back((-qb + std::sqrt(disc)) / (2.0 * qa));
            }
        } else if (std::fabs(qb) > 1e-14) {
            mus.push_back(-qc / qb);
        }
        for (double mu : mus) {
            const double lambda = B - mu * C;
            if (std::fabs(lambda) < 1e-14) continue;
            consider((v - mu * u) / lambda, 0.0);
        }
        if (std::fabs(C) > 1e-14) consider(u / C, 0.0);
    } else {
        // Coordinates without a disjoint partner pin mu to their best
        // coefficient; the rest obey c - mu 1 = lambda M alpha with the
        // mass equation fixing |lambda|, and z = 1 - sum alpha goes to an
        // isolated coordinate achieving chat.
        const Eigen::VectorXd w = v - chat * u;
        const double Q2 = A - 2.0 * chat * B + chat * chat * C;
        if (Q2 > 0.0) {
            const double lam = std::sqrt(Q2 / (2.0 * target));
            for (double sign : {1.0, -1.0}) {
                const Eigen::VectorXd aR = w / (sign * lam);
                consider(aR, 1.0 - aR.sum());
            }
        }
        if (C > 1e-14) {
            const double gamma = std::sqrt(2.0 * target / C);
            for (double sign : {1.0, -1.0}) {
                const Eigen::VectorXd aR = sign * gamma * u;
                consider(aR, 1.0 - aR.sum());
            }
        }
    }
}

// Smallest blend fraction c in [0, 1] such that (1-c) a + c anchor meets the
// pair-mass target; 1 when the quadratic has no root in range.
double restore_fraction(const BruteSpace& sp, const std::vector<double>& a,
                        const std::vector<double>& anchor, double target) {
    const double mass = pair_mass(sp, a);
    if (mass >= target) return 0.0;
    const double cross = cross_mass(sp, a, anchor);
    const double anchor_mass = pair_mass(sp, anchor);
    // g(c) = (1-c)^2 mass + 2c(1-c) cross + c^2 anchor_mass - target
    const double qa = mass - 2.0 * cross + anchor_mass;
    const double qb = 2.0 * (cross - mass);
    const double qc = mass - target;
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc < 0.0) return 1.0;
    double c_star = 2.0;
    if (std::fabs(qa) > 1e-30) {
        for (double root : {(-qb - std::sqrt(disc)) / (2.0 * qa),
                            (-qb + std::sqrt(disc)) / (2.0 * qa)}) {
            if (root >= 0.0 && root <= 1.0) c_star = std::min(c_star, root);
        }
    } else if (std::fabs(qb) > 1e-30) {
        c_star = std::clamp(-qc / qb, 0.0, 1.0);
    }
    return c_star > 1.0 ? 1.0 : c_star;
}

}  // namespace

double brute_opt(int q, double s, int restarts, int iters, std::uint64_t seed) {
    if (q < 1 || q > 5) throw std::invalid_argument("brute_opt: q must be in [1, 5]");
    if (!(s > 1.0) || s > static_cast<double>(q)) {
        throw std::invalid_argument("brute_opt: s must be in (1, q]");
    }
    if (restarts < 1 || iters < 1) {
        throw std::invalid_argument("brute_opt: restarts and iters must be positive");
    }

    const BruteSpace sp = make_space(q);
    const double target = (s - 1.0) / (2.0 * s);

    // Feasible anchor: uniform weight on the singletons, where the
    // disjoint-pair mass (q-1)/(2q) is the largest achievable and >= target.
    std::vector<double> anchor(sp.d, 0.0);
    for (int c = 0; c < q; ++c) anchor[(1 << c) - 1] = 1.0 / q;
    const double anchor_mass = pair_mass(sp, anchor);

    // The anchor is always feasible and scores 0.
    double best = 0.0;

    // For q <= 4 every support (at most 2^15 - 1) is resolved exactly.
    if (q <= 4) {
        std::vector<int> coords;
        for (unsigned mask = 1; mask < (1u << sp.d); ++mask) {
            if (std::popcount(mask) < 2) continue;
            coords.clear();
            for (int i = 0; i < sp.d; ++i) {
                if ((mask >> i) & 1u) coords.push_back(i);
            }
            support_candidates(sp, coords, target, best);
        }
    }

    std::vector<double> a(sp.d), grad(sp.d), trial(sp.d);
    for (int r = 0; r < restarts; ++r) {
        std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(r + 1)));
        std::exponential_distribution<double> expo(1.0);
        double total = 0.0;
        for (int i = 0; i < sp.d; ++i) {
            a[i] = expo(rng);
            total += a[i];
        }
        for (int i = 0; i < sp.d; ++i) a[i] /= total;

        std::vector<double> here = anchor;
        double here_obj = objective_of(sp, anchor);

        auto snapshot = [&](const std::vector<double>& point) {
            // Restores feasibility by blending toward the anchor, then
            // records the point if it improves this restart's best.
            const double c = restore_fraction(sp, point, anchor, target);
            for (int i = 0; i < sp.d; ++i) {
                trial[i] = (1.0 - c) * point[i] + c * anchor[i];
            }
            if (pair_mass(sp, trial) < target - 1e-12) return;
            const double v = objective_of(sp, trial);
            if (v > here_obj) {
                here_obj = v;
                here = trial;
            }
        };

        // Penalty ascent. The shortfall penalty is quadratic,
        // (w/2)(target - mass)^2, so its force fades as the iterate nears
        // the boundary; per-move displacement is capped at 0.25 so the
        // capped-weight regime cannot catapult the iterate.
        for (int t = 1; t <= iters; ++t) {
            const double mass = pair_mass(sp, a);
            snapshot(a);

            const double w = std::min(1e12, std::pow(10.0, (t - 1) / 100));
            for (int i = 0; i < sp.d; ++i) grad[i] = sp.logsize[i];
            if (mass < target) {
                const double force = w * (target - mass);
                for (int i = 0; i < sp.d; ++i) {
                    double acc = 0.0;
                    for (int j : sp.disjoint[i]) acc += a[j];
                    grad[i] += force * acc;
                }
            }
            double norm2 = 0.0;
            for (int i = 0; i < sp.d; ++i) norm2 += grad[i] * grad[i];
            const double norm = std::sqrt(norm2);
            const double step = std::min(1.0 / std::sqrt(static_cast<double>(t)),
                                         norm > 1e-30 ? 0.25 / norm : 1.0);
            for (int i = 0; i < sp.d; ++i) a[i] += step * grad[i];
            project_simplex(a);
        }
        snapshot(a);
        best = std::max(best, here_obj);

        // The supports the ascent discovered are then resolved exactly,
        // sub-supports included. Redundant for q <= 4 (the exhaustive sweep
        // above already covered them).
        if (q > 4) {
            for (const std::vector<double>* point : {&here, &a}) {
                std::vector<std::pair<double, int>> heavy;
                for (int i = 0; i < sp.d; ++i) {
                    if ((*point)[i] > 1e-3) heavy.push_back({(*point)[i], i});
                }
                std::sort(heavy.begin(), heavy.end(), std::greater<>());
                if (heavy.size() > 12) heavy.resize(12);
                const int h = static_cast<int>(heavy.size());
                std::vector<int> coords;
                for (unsigned sub = 1; sub < (1u << h); ++sub) {
                    if (std::popcount(sub) < 2) continue;
                    coords.clear();
                    for (int i = 0; i < h; ++i) {
                        if ((sub >> i) & 1u) coords.push_back(heavy[i].second);
                    }
                    support_candidates(sp, coords, target, best);
                }
            }
        }
    }
    return best;
}

colorsets::WeightVector to_weight_vector(const StationaryPoint& p) {
    const int q = p.candidate.universe();
    colorsets::WeightVector v(q);
    std::vector<std::uint32_t> masks;
    int next = 0;
    for (int sz : p.candidate.sizes) {
        std::uint32_t mask = 0;
        for (int i = 0; i < sz; ++i) mask |= 1u << (next + i);
        masks.push_back(mask);
        next += sz;
    }
    const int k = p.candidate.parts();
    for (int i = 0; i < k; ++i) {
        // Clamp the tolerated negative rounding fuzz so the vector is storable.
        v.set(masks[i], std::max(0.0, p.alphas[i]));
    }
    if (p.candidate.kind == supports::SizedCandidate::Kind::kQ) {
        v.set(masks[0] | masks[1], std::max(0.0, p.alphas[k]));
    }
    return v;
}

namespace {

nlohmann::ordered_json point_json(const StationaryPoint& p) {
    nlohmann::ordered_json j;
    const bool is_q = p.candidate.kind == supports::SizedCandidate::Kind::kQ;
    j["kind"] = is_q ? "Q" : "P";
    j["sizes"] = p.candidate.sizes;
    if (is_q) j["merged"] = {1, 2};
    nlohmann::ordered_json alphas = nlohmann::ordered_json::array();
    const int k = p.candidate.parts();
    for (int i = 0; i < k; ++i) alphas.push_back(json_num(p.alphas[i]));
    j["alphas"] = std::move(alphas);
    if (is_q) j["beta"] = json_num(p.alphas[k]);
    j["lambda"] = json_num(p.lambda);
    j["mu"] = json_num(p.mu);
    j["objective"] = json_num(p.objective);
    j["feasible"] = p.feasible;
    return j;
}

}  // namespace

std::string to_json_string(const StationaryPoint& p) { return point_json(p).dump(); }

std::string to_json_string(const SolveReport& r) {
    nlohmann::ordered_json j;
    j["q"] = r.q;
    j["s"] = json_num(r.s);
    j["paranoid"] = r.paranoid;
    j["opt_value"] = json_num(r.opt_value);
    j["best"] = point_json(r.best);
    nlohmann::ordered_json ties = nlohmann::ordered_json::array();
    for (const auto& t : r.ties) ties.push_back(point_json(t));
    j["ties"] = std::move(ties);
    j["candidates_evaluated"] = r.candidates_evaluated;
    return j.dump();
}

}  // namespace chromopt::kkt
