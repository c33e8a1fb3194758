#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "chromopt/counterexamples.hpp"
#include "chromopt/graphs.hpp"

using namespace chromopt;
using namespace chromopt::graphs;

namespace {

ColoredGraph cycle_graph(int n) {
    ColoredGraph g(n);
    for (int i = 0; i < n; ++i) g.add_edge(std::min(i, (i + 1) % n),
                                           std::max(i, (i + 1) % n));
    return g;
}

ColoredGraph random_graph(int n, double p, std::mt19937_64& rng) {
    ColoredGraph g(n);
    std::bernoulli_distribution coin(p);
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            if (coin(rng)) g.add_edge(u, v);
        }
    }
    return g;
}

ColoredGraph petersen() {
    ColoredGraph g(10);
    for (int i = 0; i < 5; ++i) {
        g.add_edge(std::min(i, (i + 1) % 5), std::max(i, (i + 1) % 5));  // outer C5
        g.add_edge(i, 5 + i);                                            // spokes
        g.add_edge(std::min(5 + i, 5 + (i + 2) % 5),
                   std::max(5 + i, 5 + (i + 2) % 5));                    // pentagram
    }
    return g;
}

}  // namespace

TEST_SUITE("graphs") {

TEST_CASE("edge bookkeeping rejects malformed input") {
    ColoredGraph g(4);
    g.add_edge(0, 1);
    g.add_edge(2, 1);
    CHECK(g.has_edge(1, 2));
    CHECK_FALSE(g.has_edge(0, 2));
    CHECK_THROWS_AS(g.add_edge(1, 1), std::invalid_argument);
    CHECK_THROWS_AS(g.add_edge(0, 4), std::invalid_argument);
    CHECK_THROWS_AS(g.add_edge(1, 0), std::invalid_argument);  // duplicate
}

TEST_CASE("balanced multipartite construction") {
    const auto g = build_turan(7, 3);
    CHECK(g.n == 7);
    // Parts 3,2,2: edges = (49 - 9 - 4 - 4) / 2.
    CHECK(g.edge_count() == 16);
    CHECK(g.has_edge(0, 3));
    CHECK_FALSE(g.has_edge(0, 1));  // same part
    CHECK_THROWS_AS(build_turan(2, 3), std::invalid_argument);
    CHECK_THROWS_AS(build_turan(10001, 2), std::invalid_argument);
}

TEST_CASE("cycle counts match the closed-form chromatic polynomial") {
    for (int n = 3; n <= 8; ++n) {
        for (int q = 2; q <= 5; ++q) {
            CAPTURE(n);
            CAPTURE(q);
            BigInt expect = 1;
            for (int i = 0; i < n; ++i) expect *= (q - 1);
            expect += (n % 2 == 0) ? BigInt(q - 1) : BigInt(-(q - 1));
            CHECK(count_colorings_dc(cycle_graph(n), q).count == expect);
            CHECK(count_colorings_brute(cycle_graph(n), q).count == expect);
        }
    }
}

TEST_CASE("square with three colors has 18 proper colorings") {
    CHECK(count_colorings_brute(cycle_graph(4), 3).count == 18);
}

TEST_CASE("petersen graph has 120 proper 3-colorings") {
    const auto r = count_colorings_dc(petersen(), 3);
    CHECK(r.count == 120);
    CHECK(r.method == CountMethod::kDeletionContraction);
    CHECK(count_colorings_brute(petersen(), 3).count == 120);
}

TEST_CASE("trees and empty graphs hit the base cases") {
    ColoredGraph path(6);
    for (int i = 0; i < 5; ++i) path.add_edge(i, i + 1);
    CHECK(count_colorings_dc(path, 3).count == 96);  // 3 * 2^5
    ColoredGraph empty(4);
    CHECK(count_colorings_dc(empty, 5).count == 625);
    ColoredGraph k4(4);
    for (int u = 0; u < 4; ++u) {
        for (int v = u + 1; v < 4; ++v) k4.add_edge(u, v);
    }
    CHECK(count_colorings_dc(k4, 5).count == 120);  // 5*4*3*2
    CHECK(count_colorings_dc(k4, 3).count == 0);
}

TEST_CASE("brute force and contraction agree on random graphs") {
    std::mt19937_64 rng(20240801);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 4 + static_cast<int>(rng() % 5);
        const int q = 2 + static_cast<int>(rng() % 3);
        const auto g = random_graph(n, 0.4, rng);
        CAPTURE(trial);
        CHECK(count_colorings_brute(g, q).count == count_colorings_dc(g, q).count);
    }
}

TEST_CASE("stirling closed form agrees with both counters") {
    const std::vector<std::vector<int>> shapes = {
        {3, 2, 2}, {4, 1}, {2, 2, 2}, {1, 1, 1, 1}, {5, 3}};
    for (const auto& parts : shapes) {
        int n = 0;
        for (int p : parts) n += p;
        ColoredGraph g(n);
        int off_u = 0;
        for (size_t i = 0; i < parts.size(); ++i) {
            int off_v = 0;
            for (size_t j = 0; j < parts.size(); ++j) {
                if (i < j) {
                    for (int a = 0; a < parts[i]; ++a) {
                        for (int b = 0; b < parts[j]; ++b) {
                            g.add_edge(off_u + a, off_v + b);
                        }
                    }
                }
                off_v += parts[j];
            }
            off_u += parts[i];
        }
        for (int q = 2; q <= 5; ++q) {
            CAPTURE(q);
            const auto m = count_colorings_multipartite(parts, q);
            CHECK(m.method == CountMethod::kMultipartite);
            CHECK(m.count == count_colorings_brute(g, q).count);
            CHECK(m.count == count_colorings_dc(g, q).count);
        }
    }
}

TEST_CASE("multipartite count of a single part is q choose-free") {
    // One part of size 3: colorings are arbitrary, q^0-free: every vertex
    // independent, so q^3... but within a part there are no edges at all.
    CHECK(count_colorings_multipartite({3}, 2).count == 8);
    CHECK(count_colorings_multipartite({1, 1}, 3).count == 6);  // one edge
}

TEST_CASE("brute force rejects oversized state spaces") {
    ColoredGraph big(9);
    CHECK_THROWS_AS(count_colorings_brute(big, 10), std::invalid_argument);
    ColoredGraph g(2);
    CHECK_THROWS_AS(count_colorings_brute(g, 0), std::invalid_argument);
}

TEST_CASE("blow-up part sizes follow the largest remainders") {
    const auto v = counterexamples::q13_vector();
    const auto parts = g_alpha_part_sizes(v, 220);
    REQUIRE(parts.size() == 11);
    int total = 0;
    for (int p : parts) total += p;
    CHECK(total == 220);
    CHECK(parts[0] == 34);
    CHECK(parts[1] == 33);
    for (size_t i = 2; i < parts.size(); ++i) CHECK(parts[i] == 17);
}

TEST_CASE("blow-up joins exactly the disjoint clusters") {
    const auto v = counterexamples::q13_vector();
    const int n = 33;
    const auto parts = g_alpha_part_sizes(v, n);
    const auto g = build_g_alpha(v, n);
    CHECK(g.n == n);
    // Map vertices to clusters, then check the complete-join pattern.
    std::vector<int> owner(n);
    std::vector<std::uint32_t> masks;
    for (const auto& [mask, w] : v.entries()) masks.push_back(mask);
    {
        int at = 0;
        for (size_t c = 0; c < parts.size(); ++c) {
            for (int i = 0; i < parts[c]; ++i) owner[at++] = static_cast<int>(c);
        }
    }
    long long expect_edges = 0;
    for (size_t a = 0; a < parts.size(); ++a) {
        for (size_t b = a + 1; b < parts.size(); ++b) {
            if ((masks[a] & masks[b]) == 0) {
                expect_edges += static_cast<long long>(parts[a]) * parts[b];
            }
        }
    }
    CHECK(g.edge_count() == expect_edges);
    for (const auto& [u, w] : g.edges) {
        CHECK(owner[u] != owner[w]);
        CHECK((masks[owner[u]] & masks[owner[w]]) == 0);
    }
}

TEST_CASE("log of a big integer tracks bit length") {
    BigInt x = 1;
    for (int i = 0; i < 100; ++i) x *= 2;
    CHECK(log_of_bigint(x) == doctest::Approx(100.0 * std::log(2.0)).epsilon(1e-12));
    BigInt y = 1;
    for (int i = 0; i < 30; ++i) y *= 10;
    CHECK(log_of_bigint(y) == doctest::Approx(30.0 * std::log(10.0)).epsilon(1e-12));
    CHECK(log_of_bigint(BigInt(1)) == doctest::Approx(0.0));
}

TEST_CASE("edit distances: labeled is exact, unlabeled minimizes over relabelings") {
    const auto c4 = cycle_graph(4);
    ColoredGraph p4(4);
    p4.add_edge(0, 1);
    p4.add_edge(1, 2);
    p4.add_edge(2, 3);
    CHECK(edit_distance_labeled(c4, p4) == 1);
    CHECK(edit_distance_iso(c4, p4) == 1);

    // The same 4-cycle under a relabeling: labeled distance is positive,
    // unlabeled distance vanishes.
    ColoredGraph shuffled(4);
    shuffled.add_edge(0, 2);
    shuffled.add_edge(1, 2);
    shuffled.add_edge(1, 3);
    shuffled.add_edge(0, 3);
    CHECK(edit_distance_labeled(c4, shuffled) > 0);
    CHECK(edit_distance_iso(c4, shuffled) == 0);
    CHECK_THROWS_AS(edit_distance_iso(petersen(), petersen()), std::invalid_argument);
}

TEST_CASE("graph files round trip") {
    const auto g = build_turan(6, 2);
    std::ostringstream out;
    write_graph(g, out);
    std::istringstream in(out.str());
    const auto back = parse_graph(in);
    CHECK(back.n == g.n);
    CHECK(back.edges == g.edges);
    std::istringstream bad("2 1\n1 1\n");
    CHECK_THROWS_AS(parse_graph(bad), std::invalid_argument);
}

TEST_CASE("count results serialize with a decimal count string") {
    const auto r = count_colorings_brute(cycle_graph(4), 3);
    const std::string j = graphs::to_json_string(r);
    CHECK(j.find("\"count\":\"18\"") != std::string::npos);
    CHECK(j.find("\"method\":\"brute\"") != std::string::npos);
    CHECK(j.find("\"log_rate\":") != std::string::npos);
}

}  // TEST_SUITE
