// Command line front end: solve / counterexample / count / sweep / verify.
//
// Exit codes: 0 success, 1 internal failure, 2 usage or parameter error,
// 3 verification-suite failure. All floats are printed with 12 significant
// digits; identical arguments and seed produce byte-identical output.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "chromopt/colorsets.hpp"
#include "chromopt/counterexamples.hpp"
#include "chromopt/format.hpp"
#include "chromopt/graphs.hpp"
#include "chromopt/kkt.hpp"
#include "chromopt/relaxation.hpp"
#include "chromopt/supports.hpp"

namespace {

using chromopt::format_sig12;
using chromopt::round_sig12;

int thread_cap() {
    const char* env = std::getenv("CHROMOPT_THREADS");
    if (env == nullptr) return 1;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) {
        std::cerr << "warning: ignoring invalid CHROMOPT_THREADS value\n";
        return 1;
    }
    return static_cast<int>(v);
}

std::string bool_word(bool b) { return b ? "true" : "false"; }

// ---------------------------------------------------------------- solve --

int run_solve(int q, double s, bool paranoid, const std::string& output) {
    const auto rep = chromopt::kkt::global_solve(q, s, paranoid);
    if (output == "json") {
        std::cout << chromopt::kkt::to_json_string(rep) << "\n";
        return 0;
    }
    std::cout << "q = " << rep.q << "\n";
    std::cout << "s = " << format_sig12(rep.s) << "\n";
    std::cout << "paranoid = " << bool_word(rep.paranoid) << "\n";
    std::cout << "opt_value = " << format_sig12(rep.opt_value) << "\n";
    std::cout << "candidates_evaluated = " << rep.candidates_evaluated << "\n";
    std::cout << "best_kind = "
              << (rep.best.candidate.kind == chromopt::supports::SizedCandidate::Kind::kP
                      ? "P"
                      : "Q")
              << "\n";
    std::cout << "best_sizes =";
    for (int sz : rep.best.candidate.sizes) std::cout << ' ' << sz;
    std::cout << "\nbest_alphas =";
    for (double a : rep.best.alphas) std::cout << ' ' << format_sig12(a);
    std::cout << "\nbest_lambda = " << format_sig12(rep.best.lambda) << "\n";
    std::cout << "best_mu = " << format_sig12(rep.best.mu) << "\n";
    std::cout << "ties = " << rep.ties.size() << "\n";
    return 0;
}

// ------------------------------------------------------- counterexample --

int run_family(int s, int t, int r, const std::string& output) {
    const auto rep = chromopt::counterexamples::construct_counterexample(s, t, r);
    if (output == "json") {
        std::cout << chromopt::counterexamples::to_json_string(rep) << "\n";
        return 0;
    }
    std::cout << "s = " << rep.s << "\nt = " << rep.t << "\nr = " << rep.r
              << "\nq = " << rep.q << "\n";
    std::cout << "X = " << format_sig12(rep.X) << "\n";
    std::cout << "Y = " << format_sig12(rep.Y) << "\n";
    std::cout << "margin = " << format_sig12(rep.margin) << "\n";
    std::cout << "hypothesis_ok = " << bool_word(rep.hypothesis_ok) << "\n";
    std::cout << "margin_ok = " << bool_word(rep.margin_ok) << "\n";
    std::cout << "alphas_nonneg = " << bool_word(rep.alphas_nonneg) << "\n";
    std::cout << "vsum_residual = " << format_sig12(rep.vsum_residual) << "\n";
    std::cout << "sqsum_residual = " << format_sig12(rep.sqsum_residual) << "\n";
    std::cout << "valid = " << bool_word(rep.valid) << "\n";
    return 0;
}

int run_embed(int s, int q, const std::string& output) {
    const auto emb = chromopt::counterexamples::embed_counterexample(s, q);
    const double balanced = chromopt::colorsets::obj(
        chromopt::counterexamples::balanced_vector(q, s));
    if (output == "json") {
        nlohmann::ordered_json j;
        j["mode"] = "embed";
        j["s"] = s;
        j["q"] = q;
        j["found"] = emb.has_value();
        j["balanced_objective"] = round_sig12(balanced);
        if (emb) {
            j["objective"] = round_sig12(chromopt::colorsets::obj(*emb));
            j["gap"] = round_sig12(chromopt::colorsets::obj(*emb) - balanced);
            j["weights"] =
                nlohmann::ordered_json::parse(chromopt::colorsets::to_json_string(*emb));
        } else {
            j["objective"] = nullptr;
            j["gap"] = nullptr;
            j["weights"] = nullptr;
        }
        std::cout << j.dump() << "\n";
        return 0;
    }
    std::cout << "mode = embed\ns = " << s << "\nq = " << q << "\n";
    std::cout << "found = " << bool_word(emb.has_value()) << "\n";
    std::cout << "balanced_objective = " << format_sig12(balanced) << "\n";
    if (emb) {
        const double obj = chromopt::colorsets::obj(*emb);
        std::cout << "objective = " << format_sig12(obj) << "\n";
        std::cout << "gap = " << format_sig12(obj - balanced) << "\n";
    }
    return 0;
}

int run_scan(int s, long long q0, bool numeric, const std::string& output) {
    const auto mode = numeric ? chromopt::counterexamples::ScanMode::kNumeric
                              : chromopt::counterexamples::ScanMode::kHypothesis;
    const auto hits = chromopt::counterexamples::scan_counterexamples(s, q0, mode);
    if (output == "json") {
        nlohmann::ordered_json j;
        j["mode"] = "scan";
        j["s"] = s;
        j["q0"] = q0;
        j["check"] = numeric ? "numeric" : "hypothesis";
        j["hits"] = hits;
        std::cout << j.dump() << "\n";
        return 0;
    }
    for (long long q : hits) std::cout << q << "\n";
    return 0;
}

// ------------------------------------------------------------ count/sweep --

std::vector<int> turan_part_sizes(int n, int s) {
    if (s < 1 || n < s) throw std::invalid_argument("count: need n >= s >= 1");
    std::vector<int> parts;
    const int big = (n + s - 1) / s;
    const int small = n / s;
    const int nbig = n % s;
    parts.insert(parts.end(), nbig, big);
    parts.insert(parts.end(), s - nbig, small);
    return parts;
}

int run_count(int turan_s, int n, const std::string& file, int q,
              const std::string& method, const std::string& output) {
    chromopt::graphs::CountResult result;
    if (turan_s > 0) {
        if (method == "multipartite" || method == "auto") {
            result = chromopt::graphs::count_colorings_multipartite(
                turan_part_sizes(n, turan_s), q);
        } else {
            const auto g = chromopt::graphs::build_turan(n, turan_s);
            result = method == "brute" ? chromopt::graphs::count_colorings_brute(g, q)
                                       : chromopt::graphs::count_colorings_dc(g, q);
        }
    } else {
        std::ifstream in(file);
        if (!in) throw std::invalid_argument("count: cannot open graph file " + file);
        const auto g = chromopt::graphs::parse_graph(in);
        if (method == "multipartite") {
            throw std::invalid_argument("count: multipartite method needs --turan");
        }
        if (method == "dc" ||
            (method == "auto" && g.n <= 18 && g.edge_count() <= 60)) {
            result = chromopt::graphs::count_colorings_dc(g, q);
        } else {
            result = chromopt::graphs::count_colorings_brute(g, q);
        }
    }
    if (output == "json") {
        std::cout << chromopt::graphs::to_json_string(result) << "\n";
        return 0;
    }
    const char* name = result.method == chromopt::graphs::CountMethod::kBrute
                           ? "brute"
                           : (result.method == chromopt::graphs::CountMethod::kMultipartite
                                  ? "multipartite"
                                  : "deletion_contraction");
    std::cout << "n = " << result.n << "\nq = " << result.q << "\nmethod = " << name
              << "\n";
    std::cout << "count = " << result.count.str() << "\n";
    const int bits =
        result.count == 0
            ? 0
            : static_cast<int>(boost::multiprecision::msb(result.count) + 1);
    std::cout << "bits = " << bits << "\n";
    if (result.count == 0 || result.n == 0) {
        std::cout << "log_rate = -inf\n";
    } else {
        std::cout << "log_rate = "
                  << format_sig12(chromopt::graphs::log_of_bigint(result.count) /
                                  result.n)
                  << "\n";
    }
    return 0;
}

int run_sweep(int turan_s, int q, const std::string& range) {
    int lo = 0, hi = 0, step = 0;
    if (std::sscanf(range.c_str(), "%d:%d:%d", &lo, &hi, &step) != 3 || step <= 0 ||
        lo < 1 || hi < lo) {
        throw std::invalid_argument("sweep: --n expects START:END:STEP with STEP > 0");
    }
    std::cout << "n,q,count_bits,log_rate\n";
    for (int n = lo; n <= hi; n += step) {
        if (n < turan_s) continue;
        const auto result = chromopt::graphs::count_colorings_multipartite(
            turan_part_sizes(n, turan_s), q);
        const int bits =
            result.count == 0
                ? 0
                : static_cast<int>(boost::multiprecision::msb(result.count) + 1);
        std::cout << n << ',' << q << ',' << bits << ',';
        if (result.count == 0) {
            std::cout << "-inf\n";
        } else {
            std::cout << format_sig12(chromopt::graphs::log_of_bigint(result.count) / n)
                      << "\n";
        }
    }
    return 0;
}

// ----------------------------------------------------------------- verify --

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

void verify_oracle(std::uint64_t seed, std::vector<Check>& out) {
    for (int q = 2; q <= 3; ++q) {
        for (int j = 1; j <= 4; ++j) {
            const double s = 1.0 + j * (q - 1.0) / 4.0;
            const double g = chromopt::kkt::global_solve(q, s).opt_value;
            const double b = chromopt::kkt::brute_opt(q, s, 24, 1200, seed);
            const double diff = std::fabs(g - b);
            Check c;
            c.name = "oracle q=" + std::to_string(q) + " s=" + format_sig12(s);
            c.pass = diff <= 1e-6;
            c.detail = "|global - brute| = " + format_sig12(diff);
            out.push_back(std::move(c));
        }
    }
}

void verify_monotonic(std::vector<Check>& out) {
    for (int q : {6, 13}) {
        double prev = std::numeric_limits<double>::infinity();
        bool decreasing = true;
        bool bounded = true;
        for (int j = 1; j <= 10; ++j) {
            const double s = 1.0 + j * (q - 1.0) / 10.0;
            const double v = chromopt::kkt::global_solve(q, s).opt_value;
            if (!(v < prev)) decreasing = false;
            if (v > std::log(static_cast<double>(q)) - std::log(s) + 1e-12) {
                bounded = false;
            }
            prev = v;
        }
        Check c;
        c.name = "monotonic q=" + std::to_string(q);
        c.pass = decreasing;
        c.detail = decreasing ? "strictly decreasing over 10-point s grid"
                              : "not strictly decreasing";
        out.push_back(c);
        Check b;
        b.name = "upper_bound q=" + std::to_string(q);
        b.pass = bounded;
        b.detail = bounded ? "opt <= ln q - ln s on grid" : "bound violated";
        out.push_back(b);
    }
}

// Largest real root of x^3 - 2x^2 - 2x + 2 near the given start, by Newton.
double cubic_root_near(double x) {
    for (int i = 0; i < 80; ++i) {
        const double f = ((x - 2.0) * x - 2.0) * x + 2.0;
        const double df = (3.0 * x - 4.0) * x - 2.0;
        x -= f / df;
    }
    return x;
}

void verify_spectra(std::vector<Check>& out) {
    using chromopt::supports::SmallGraph;
    auto close = [](const std::vector<double>& got, const std::vector<double>& want) {
        if (got.size() != want.size()) return false;
        for (size_t i = 0; i < got.size(); ++i) {
            if (std::fabs(got[i] - want[i]) > 1e-9) return false;
        }
        return true;
    };

    const auto e3k1 = chromopt::supports::eigenvalues(SmallGraph::empty(3));
    out.push_back({"spectrum 3K1", close(e3k1, {0.0, 0.0, 0.0}), "expect 0,0,0"});

    const auto ec4 = chromopt::supports::eigenvalues(SmallGraph::cycle(4));
    out.push_back({"spectrum C4", close(ec4, {2.0, 0.0, 0.0, -2.0}), "expect 2,0,0,-2"});

    const double c2 = 2.0 * std::cos(2.0 * M_PI / 5.0);
    const double c4 = 2.0 * std::cos(4.0 * M_PI / 5.0);
    const auto ec5 = chromopt::supports::eigenvalues(SmallGraph::cycle(5));
    out.push_back({"spectrum C5", close(ec5, {2.0, c2, c2, c4, c4}),
                   "expect 2, 2cos(2pi/5) x2, 2cos(4pi/5) x2"});

    const double l1 = cubic_root_near(2.48);
    const double l2 = cubic_root_near(0.69);
    const double l3 = cubic_root_near(-1.17);
    const auto ec5p =
        chromopt::supports::eigenvalues(SmallGraph::cycle5_plus_chord());
    bool ok = close(ec5p, {l1, l2, 0.0, l3, -2.0});
    for (double lam : {ec5p[0], ec5p[1], ec5p[3]}) {
        const double res = ((lam - 2.0) * lam - 2.0) * lam + 2.0;
        if (std::fabs(res) > 1e-9) ok = false;
    }
    out.push_back(
        {"spectrum C5+", ok, "cubic roots of x^3-2x^2-2x+2 plus 0 and -2"});
}

int run_verify(const std::string& suite, std::uint64_t seed,
               const std::string& output) {
    std::vector<Check> checks;
    if (suite == "oracle" || suite == "all") verify_oracle(seed, checks);
    if (suite == "monotonic" || suite == "all") verify_monotonic(checks);
    if (suite == "spectra" || suite == "all") verify_spectra(checks);
    if (checks.empty()) throw std::invalid_argument("verify: unknown suite " + suite);

    int failures = 0;
    for (const Check& c : checks) {
        if (!c.pass) ++failures;
    }
    if (output == "json") {
        nlohmann::ordered_json j;
        j["suite"] = suite;
        j["seed"] = seed;
        j["checks"] = nlohmann::ordered_json::array();
        for (const Check& c : checks) {
            j["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        }
        j["failures"] = failures;
        j["pass"] = failures == 0;
        std::cout << j.dump() << "\n";
    } else {
        for (const Check& c : checks) {
            std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail
                      << "\n";
        }
        std::cout << "suite = " << suite << "\n";
        std::cout << "checks = " << checks.size() << "\n";
        std::cout << "failures = " << failures << "\n";
    }
    return failures == 0 ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chromopt: restricted-support weight optimization and exact "
                 "coloring counts"};
    app.require_subcommand(1);
    (void)thread_cap();

    std::string output = "text";

    auto* solve = app.add_subcommand("solve", "solve the weight optimization");
    int solve_q = 0;
    double solve_s = 0.0;
    bool paranoid = false;
    solve->add_option("--q", solve_q, "number of colors")->required();
    solve->add_option("--s", solve_s, "density parameter")->required();
    solve->add_flag("--paranoid", paranoid, "sweep near-partition shapes at every k");
    solve->add_option("--output", output, "text or json")
        ->check(CLI::IsMember({"text", "json"}));

    auto* ce = app.add_subcommand("counterexample",
                                  "family construction, embedding, or scan");
    int ce_s = 0, ce_t = -1, ce_r = -1, ce_q = -1;
    long long ce_q0 = -1;
    bool ce_scan = false, ce_numeric = false;
    ce->add_option("--s", ce_s, "number of classes")->required();
    ce->add_option("--t", ce_t, "base class size");
    ce->add_option("--r", ce_r, "remainder");
    ce->add_option("--q", ce_q, "number of colors (embed mode)");
    ce->add_option("--q0", ce_q0, "scan center");
    ce->add_flag("--scan", ce_scan, "scan q in [q0-s, q0+s]");
    ce->add_flag("--numeric", ce_numeric, "scan by direct comparison instead of the "
                                          "parameter window");
    ce->add_option("--output", output, "text or json")
        ->check(CLI::IsMember({"text", "json"}));

    auto* count = app.add_subcommand("count", "exact proper-coloring count");
    int count_turan = 0, count_n = 0, count_q = 0;
    std::string count_file, count_method = "auto";
    count->add_option("--turan", count_turan, "balanced complete multipartite: "
                                              "number of parts");
    count->add_option("--n", count_n, "vertex count (with --turan)");
    count->add_option("--file", count_file, "graph file: 'n m' then edge lines");
    count->add_option("--q", count_q, "number of colors")->required();
    count->add_option("--method", count_method, "brute, dc, multipartite, or auto")
        ->check(CLI::IsMember({"brute", "dc", "multipartite", "auto"}));
    count->add_option("--output", output, "text or json")
        ->check(CLI::IsMember({"text", "json"}));

    auto* sweep = app.add_subcommand("sweep", "CSV of log_rate over a range of n");
    int sweep_turan = 0, sweep_q = 0;
    std::string sweep_range;
    sweep->add_option("--turan", sweep_turan, "number of parts")->required();
    sweep->add_option("--q", sweep_q, "number of colors")->required();
    sweep->add_option("--n", sweep_range, "range START:END:STEP")->required();

    auto* verify = app.add_subcommand("verify", "run an invariant suite");
    std::string suite;
    std::uint64_t seed = 20240801ull;
    verify->add_option("--suite", suite, "oracle, monotonic, spectra, or all")
        ->required()
        ->check(CLI::IsMember({"oracle", "monotonic", "spectra", "all"}));
    verify->add_option("--seed", seed, "seed for randomized checks");
    verify->add_option("--output", output, "text or json")
        ->check(CLI::IsMember({"text", "json"}));

    try {
        app.parse(argc, argv);

        if (solve->parsed()) return run_solve(solve_q, solve_s, paranoid, output);
        if (ce->parsed()) {
            if (ce_scan) {
                if (ce_q0 < 0) {
                    throw std::invalid_argument("counterexample --scan needs --q0");
                }
                return run_scan(ce_s, ce_q0, ce_numeric, output);
            }
            if (ce_t >= 0 || ce_r >= 0) {
                if (ce_t < 0 || ce_r < 0) {
                    throw std::invalid_argument(
                        "counterexample family mode needs both --t and --r");
                }
                return run_family(ce_s, ce_t, ce_r, output);
            }
            if (ce_q >= 0) return run_embed(ce_s, ce_q, output);
            throw std::invalid_argument(
                "counterexample: give --t/--r, --q, or --scan --q0");
        }
        if (count->parsed()) {
            if ((count_turan > 0) == !count_file.empty()) {
                throw std::invalid_argument("count: give exactly one of --turan or --file");
            }
            if (count_turan > 0 && count_n < 1) {
                throw std::invalid_argument("count: --turan needs --n");
            }
            return run_count(count_turan, count_n, count_file, count_q, count_method,
                             output);
        }
        if (sweep->parsed()) return run_sweep(sweep_turan, sweep_q, sweep_range);
        if (verify->parsed()) return run_verify(suite, seed, output);
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
