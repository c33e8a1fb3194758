#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "chromopt/relaxation.hpp"

using namespace chromopt::relaxation;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Constraint residuals of a coordinate vector against sum = 1 and
// sum of squares = 1/s.
void check_on_constraint_set(const std::vector<double>& a, double s) {
    double total = 0.0, sq = 0.0;
    for (double x : a) {
        total += x;
        sq += x * x;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sq == doctest::Approx(1.0 / s).epsilon(1e-12));
}

double entropy_sum(const std::vector<double>& a) {
    double f = 0.0;
    for (double x : a) f += xlogx(x);
    return f;
}

}  // namespace

TEST_SUITE("relaxation") {

TEST_CASE("xlogx extends by continuity at zero") {
    CHECK(xlogx(0.0) == 0.0);
    CHECK(xlogx(1.0) == 0.0);
    CHECK(xlogx(2.0) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
    CHECK(xlogx(-0.1) == kNegInf);
}

TEST_CASE("unpinned bound reduces to -ln s") {
    for (double s : {1.5, 2.0, 2.5, 7.0}) {
        CHECK(relaxed_bound(s, 0.0, 0) == doctest::Approx(-std::log(s)).epsilon(1e-12));
        CHECK(relaxed_bound(s, 0.01, 0) == doctest::Approx(-std::log(s)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(relaxed_bound(1.0, 0.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(relaxed_bound(2.0, 0.5, 2), std::invalid_argument);
    CHECK_THROWS_AS(relaxed_bound(2.0, -0.1, 1), std::invalid_argument);
}

TEST_CASE("pinned solutions satisfy the original constraints exactly") {
    for (double s : {1.5, 2.0, 2.5}) {
        for (int k : {2, 3, 4, 5}) {
            if (k < std::ceil(s)) continue;
            for (double delta : {0.0, 0.01, 0.05}) {
                const auto sol = relaxed_solve(s, k, delta);
                if (!sol) continue;
                CAPTURE(s);
                CAPTURE(k);
                CAPTURE(delta);
                REQUIRE(static_cast<int>(sol->alphas.size()) == k);
                check_on_constraint_set(sol->alphas, s);
                for (double a : sol->alphas) CHECK(a >= delta - 1e-15);
                CHECK(std::is_sorted(sol->alphas.rbegin(), sol->alphas.rend()));
                CHECK(sol->F == doctest::Approx(entropy_sum(sol->alphas)).epsilon(1e-12));
                CHECK(sol->F <= -std::log(s) + 1e-12);
                CHECK(sol->F <= relaxed_bound(s, delta, sol->ell) + 1e-12);
            }
        }
    }
}

TEST_CASE("three-coordinate solutions dominate a dense sweep of the arc") {
    // The arc parametrizes the whole constraint set for k = 3 up to
    // permutation, so a grid maximum bounds the true value from below.
    const double s = 2.5;
    const double delta = 0.01;
    const auto sol = relaxed_solve(s, 3, delta);
    REQUIRE(sol.has_value());
    double grid_best = kNegInf;
    for (int i = 0; i <= 20000; ++i) {
        const double theta = (kPi / 3.0) * i / 20000.0;
        const auto p = theta_param(s, theta);
        const double lo = std::min({p.alpha1, p.alpha2, p.alpha3});
        if (lo < delta) continue;
        grid_best = std::max(grid_best, f_of_theta(s, theta));
    }
    CHECK(sol->F >= grid_best - 1e-6);
}

TEST_CASE("infeasible floors produce no solution") {
    // delta = 0.33 forces near-uniform weights, but s = 2.9 demands a square
    // mass no three such coordinates can reach.
    CHECK_FALSE(relaxed_solve(2.9, 3, 0.33).has_value());
    CHECK_THROWS_AS(relaxed_solve(1.0, 3, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(relaxed_solve(2.5, 2, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(relaxed_solve(2.5, 3, 0.5), std::invalid_argument);
}

TEST_CASE("arc points stay on the constraint set") {
    for (double s : {1.5, 2.0, 2.9}) {
        for (int i = 0; i <= 8; ++i) {
            const double theta = (kPi / 3.0) * i / 8.0;
            const auto p = theta_param(s, theta);
            check_on_constraint_set({p.alpha1, p.alpha2, p.alpha3}, s);
        }
    }
    CHECK_THROWS_AS(theta_param(3.5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(theta_param(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("the arc endpoint is a flat point with positive curvature") {
    for (double s : {1.5, 2.0, 2.5, 3.0 - 1e-6}) {
        CAPTURE(s);
        const auto prof = f_theta_profile(s, 101);
        CHECK(prof.samples.size() == 101);
        CHECK(prof.samples.front().first == doctest::Approx(0.0));
        CHECK(prof.samples.back().first == doctest::Approx(kPi / 3.0).epsilon(1e-12));
        CHECK(std::fabs(prof.fd_first) <= 1e-6);
        CHECK(corner_second_derivative(s) > 0.0);
    }
    // Away from the degenerate limit the finite difference resolves the
    // closed-form curvature.
    for (double s : {1.5, 2.0, 2.5}) {
        const auto prof = f_theta_profile(s, 3);
        const double exact = corner_second_derivative(s);
        CHECK(prof.fd_second == doctest::Approx(exact).epsilon(1e-4));
    }
}

TEST_CASE("first feasible angle is found by bisection") {
    const double s = 2.0;
    const double delta = 0.05;
    const double theta = theta_zero(s, delta);
    const auto at = theta_param(s, theta);
    CHECK(at.alpha3 >= delta - 1e-9);
    if (theta > 1e-9) {
        const auto before = theta_param(s, theta - 1e-4);
        CHECK(before.alpha3 < delta);
    }
    // Already satisfied at the start of the arc: s = 2.9 starts with
    // alpha3(0) about 0.246.
    CHECK(theta_zero(2.9, 0.1) == 0.0);
    CHECK_THROWS_AS(theta_zero(2.9, 0.4), std::invalid_argument);
    CHECK_THROWS_AS(theta_zero(2.0, -0.5), std::invalid_argument);
}

TEST_CASE("relaxed solutions serialize to json") {
    const auto sol = relaxed_solve(2.5, 3, 0.01);
    REQUIRE(sol.has_value());
    const std::string j = to_json_string(*sol);
    CHECK(j.find("\"k\":3") != std::string::npos);
    CHECK(j.find("\"ell\":") != std::string::npos);
    CHECK(j.find("\"alphas\":") != std::string::npos);
}

}  // TEST_SUITE
