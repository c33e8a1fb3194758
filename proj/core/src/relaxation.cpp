#include "chromopt/relaxation.hpp"

#include <cmath>
#include <stdexcept>

#include "json_util.hpp"

namespace chromopt::relaxation {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double xlogx(double x) {
    if (x > 0.0) return x * std::log(x);
    if (x == 0.0) return 0.0;
    return kNegInf;
}

std::optional<RelaxedSolution> relaxed_solve(double s, int k, double delta) {
    if (!(s > 1.0)) throw std::invalid_argument("relaxed_solve: s must exceed 1");
    if (k < static_cast<int>(std::ceil(s))) {
        throw std::invalid_argument("relaxed_solve: k must be at least ceil(s)");
    }
    if (!(delta >= 0.0) || !(delta < 1.0 / k)) {
        throw std::invalid_argument("relaxed_solve: delta must lie in [0, 1/k)");
    }

    std::optional<RelaxedSolution> best;
    for (int ell = 0; ell <= k - 2; ++ell) {
        const double pinned = ell * delta;
        const double denom = 1.0 - ell * s * delta * delta;
        if (!(denom > 0.0) || !(pinned < 1.0)) continue;
        const double s_star = s * (1.0 - pinned) * (1.0 - pinned) / denom;
        const int m = k - ell;
        // The free block supports a nonnegative two-value solution exactly
        // when it has ceil(s_star) coordinates.
        if (!(s_star > 1.0) || m != static_cast<int>(std::ceil(s_star))) continue;

        const double excess = m / s_star - 1.0;  // in [0, 1) since m-1 < s_star <= m
        const double x = 1.0 / m + std::sqrt(std::max(0.0, excess / (m - 1))) / m;
        const double y = 1.0 / m - std::sqrt(std::max(0.0, excess * (m - 1))) / m;
        const double big = (1.0 - pinned) * x;
        const double small = (1.0 - pinned) * y;
        if (!(small > delta)) continue;  // the free block must clear the floor

        RelaxedSolution sol;
        sol.k = k;
        sol.delta = delta;
        sol.ell = ell;
        sol.s_star = s_star;
        sol.alphas.assign(m - 1, big);
        sol.alphas.push_back(small);
        sol.alphas.insert(sol.alphas.end(), ell, delta);
        sol.F = (m - 1) * xlogx(big) + xlogx(small) + ell * xlogx(delta);
        if (!best || sol.F > best->F) best = std::move(sol);
    }
    return best;
}

double relaxed_bound(double s, double delta, int ell) {
    if (!(s > 1.0)) throw std::invalid_argument("relaxed_bound: s must exceed 1");
    if (ell < 0) throw std::invalid_argument("relaxed_bound: ell must be nonnegative");
    if (!(delta >= 0.0) || !(delta < 1.0)) {
        throw std::invalid_argument("relaxed_bound: delta must lie in [0, 1)");
    }
    const double pinned = ell * delta;
    if (!(pinned < 1.0)) throw std::invalid_argument("relaxed_bound: ell*delta must be below 1");
    const double denom = 1.0 - ell * s * delta * delta;
    if (!(denom > 0.0)) {
        throw std::invalid_argument("relaxed_bound: 1 - ell*s*delta^2 must be positive");
    }
    const double s_star = s * (1.0 - pinned) * (1.0 - pinned) / denom;
    return (1.0 - pinned) * (std::log(1.0 - pinned) - std::log(s_star)) +
           ell * xlogx(delta);
}

ThetaPoint theta_param(double s, double theta) {
    if (!(s > 1.0) || !(s <= 3.0)) {
        throw std::invalid_argument("theta_param: s must lie in (1, 3]");
    }
    const double rho = std::sqrt((3.0 - s) / (3.0 * s));
    const double c = std::cos(theta), sn = std::sin(theta);
    ThetaPoint p;
    p.alpha1 = 1.0 / 3.0 + rho / std::sqrt(6.0) * c + rho / std::sqrt(2.0) * sn;
    p.alpha2 = 1.0 / 3.0 + rho / std::sqrt(6.0) * c - rho / std::sqrt(2.0) * sn;
    p.alpha3 = 1.0 / 3.0 - 2.0 * rho / std::sqrt(6.0) * c;
    return p;
}

double f_of_theta(double s, double theta) {
    const ThetaPoint p = theta_param(s, theta);
    return xlogx(p.alpha1) + xlogx(p.alpha2) + xlogx(p.alpha3);
}

ThetaProfile f_theta_profile(double s, int grid) {
    if (grid < 2) throw std::invalid_argument("f_theta_profile: grid must be at least 2");
    ThetaProfile prof;
    prof.samples.reserve(grid);
    const double end = kPi / 3.0;
    for (int i = 0; i < grid; ++i) {
        const double theta = end * i / (grid - 1);
        prof.samples.emplace_back(theta, f_of_theta(s, theta));
    }
    const double h = kFdStep;
    const double f0 = f_of_theta(s, end);
    const double fp = f_of_theta(s, end + h);
    const double fm = f_of_theta(s, end - h);
    prof.fd_first = (fp - fm) / (2.0 * h);
    prof.fd_second = (fp - 2.0 * f0 + fm) / (h * h);
    return prof;
}

double corner_second_derivative(double s) {
    if (!(s > 1.0) || !(s <= 3.0)) {
        throw std::invalid_argument("corner_second_derivative: s must lie in (1, 3]");
    }
    const double rho = std::sqrt((3.0 - s) / (3.0 * s));
    const double a = 1.0 / 3.0 - rho / std::sqrt(6.0);
    const double b = 1.0 / 3.0 + 2.0 * rho / std::sqrt(6.0);
    return rho * rho / a - 2.0 * rho / std::sqrt(6.0) * std::log(b / a);
}

double theta_zero(double s, double delta) {
    if (!(delta >= 0.0)) throw std::invalid_argument("theta_zero: delta must be nonnegative");
    const double end = kPi / 3.0;
    // alpha3 is increasing on [0, pi/3].
    if (theta_param(s, 0.0).alpha3 >= delta) return 0.0;
    if (theta_param(s, end).alpha3 < delta) {
        throw std::invalid_argument("theta_zero: delta exceeds alpha3 everywhere");
    }
    double lo = 0.0, hi = end;
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (theta_param(s, mid).alpha3 >= delta) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

std::string to_json_string(const RelaxedSolution& r) {
    nlohmann::ordered_json j;
    j["k"] = r.k;
    j["delta"] = json_num(r.delta);
    j["ell"] = r.ell;
    j["s_star"] = json_num(r.s_star);
    nlohmann::ordered_json alphas = nlohmann::ordered_json::array();
    for (double a : r.alphas) alphas.push_back(json_num(a));
    j["alphas"] = std::move(alphas);
    j["F"] = json_num(r.F);
    return j.dump();
}

}  // namespace chromopt::relaxation
