// End-to-end checks of the installed command line tool: output schemas,
// byte determinism, and the documented exit codes.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>

#include <json.hpp>

using nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string cmd = std::string(CHROMOPT_CLI_PATH) + " " + args + " 2>/dev/null";
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        r.out.append(buf.data(), got);
    }
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

json load_schema(const std::string& name) {
    std::ifstream in(std::string(CHROMOPT_SCHEMA_DIR) + "/" + name);
    REQUIRE(in.good());
    json j;
    in >> j;
    return j;
}

// Validator for the subset of json-schema the shipped schemas use: type
// (single or list), required, properties, additionalProperties: false,
// items, enum, minimum/maximum, minItems, pattern, oneOf, and $ref to
// "#/definitions/..." or to a sibling schema file.
bool validate(const json& inst, const json& schema, const json& root,
              std::string& err);

bool type_matches(const json& inst, const std::string& t) {
    if (t == "object") return inst.is_object();
    if (t == "array") return inst.is_array();
    if (t == "string") return inst.is_string();
    if (t == "boolean") return inst.is_boolean();
    if (t == "null") return inst.is_null();
    if (t == "integer") return inst.is_number_integer() || inst.is_number_unsigned();
    if (t == "number") return inst.is_number();
    return false;
}

bool validate(const json& inst, const json& schema, const json& root,
              std::string& err) {
    if (schema.contains("$ref")) {
        const std::string ref = schema["$ref"];
        if (ref.rfind("#/definitions/", 0) == 0) {
            return validate(inst, root["definitions"][ref.substr(14)], root, err);
        }
        const json other = load_schema(ref);
        return validate(inst, other, other, err);
    }
    if (schema.contains("oneOf")) {
        int hits = 0;
        for (const auto& sub : schema["oneOf"]) {
            std::string ignored;
            if (validate(inst, sub, root, ignored)) ++hits;
        }
        if (hits != 1) {
            err = "oneOf matched " + std::to_string(hits) + " branches";
            return false;
        }
        return true;
    }
    if (schema.contains("type")) {
        const auto& t = schema["type"];
        bool ok = false;
        if (t.is_string()) {
            ok = type_matches(inst, t.get<std::string>());
        } else {
            for (const auto& alt : t) ok = ok || type_matches(inst, alt.get<std::string>());
        }
        if (!ok) {
            err = "type mismatch against " + t.dump() + " for " + inst.dump().substr(0, 80);
            return false;
        }
    }
    if (schema.contains("enum")) {
        bool ok = false;
        for (const auto& v : schema["enum"]) ok = ok || (v == inst);
        if (!ok) {
            err = "value " + inst.dump() + " not in enum";
            return false;
        }
    }
    if (inst.is_number()) {
        if (schema.contains("minimum") && inst.get<double>() < schema["minimum"].get<double>()) {
            err = "below minimum";
            return false;
        }
        if (schema.contains("maximum") && inst.get<double>() > schema["maximum"].get<double>()) {
            err = "above maximum";
            return false;
        }
    }
    if (inst.is_string() && schema.contains("pattern")) {
        if (!std::regex_match(inst.get<std::string>(),
                              std::regex(schema["pattern"].get<std::string>()))) {
            err = "pattern mismatch";
            return false;
        }
    }
    if (inst.is_object()) {
        if (schema.contains("required")) {
            for (const auto& key : schema["required"]) {
                if (!inst.contains(key.get<std::string>())) {
                    err = "missing required key " + key.get<std::string>();
                    return false;
                }
            }
        }
        const json props = schema.value("properties", json::object());
        for (const auto& [key, value] : inst.items()) {
            if (props.contains(key)) {
                if (!validate(value, props[key], root, err)) {
                    err = key + ": " + err;
                    return false;
                }
            } else if (schema.value("additionalProperties", json(true)) == json(false)) {
                err = "unexpected key " + key;
                return false;
            }
        }
    }
    if (inst.is_array()) {
        if (schema.contains("minItems") &&
            inst.size() < schema["minItems"].get<size_t>()) {
            err = "too few items";
            return false;
        }
        if (schema.contains("items")) {
            for (size_t i = 0; i < inst.size(); ++i) {
                if (!validate(inst[i], schema["items"], root, err)) {
                    err = "item " + std::to_string(i) + ": " + err;
                    return false;
                }
            }
        }
    }
    return true;
}

void expect_valid(const std::string& payload, const std::string& schema_name) {
    const json inst = json::parse(payload);
    const json schema = load_schema(schema_name);
    std::string err;
    const bool ok = validate(inst, schema, schema, err);
    CAPTURE(schema_name);
    CAPTURE(err);
    CHECK(ok);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("solve output validates against its schema") {
    const auto r = run("solve --q 13 --s 10 --output json");
    REQUIRE(r.exit_code == 0);
    expect_valid(r.out, "solve_report.schema.json");
    const json j = json::parse(r.out);
    CHECK(j["opt_value"].get<double>() == doctest::Approx(0.210568080873).epsilon(1e-11));
}

TEST_CASE("counterexample outputs validate against their schemas") {
    const auto fam = run("counterexample --s 100 --t 3 --r 20 --output json");
    REQUIRE(fam.exit_code == 0);
    expect_valid(fam.out, "counterexample_report.schema.json");

    const auto emb = run("counterexample --s 10 --q 13 --output json");
    REQUIRE(emb.exit_code == 0);
    expect_valid(emb.out, "embed_result.schema.json");
    CHECK(json::parse(emb.out)["found"] == true);

    const auto none = run("counterexample --s 10 --q 19 --output json");
    REQUIRE(none.exit_code == 0);
    expect_valid(none.out, "embed_result.schema.json");
    CHECK(json::parse(none.out)["found"] == false);

    const auto scan = run("counterexample --s 7000 --scan --q0 99900 --output json");
    REQUIRE(scan.exit_code == 0);
    expect_valid(scan.out, "scan_result.schema.json");
    CHECK(json::parse(scan.out)["hits"].size() == 200);
}

TEST_CASE("count and verify outputs validate against their schemas") {
    const auto c = run("count --turan 3 --n 7 --q 5 --output json");
    REQUIRE(c.exit_code == 0);
    expect_valid(c.out, "count_result.schema.json");
    CHECK(json::parse(c.out)["count"] == "1620");

    const auto v = run("verify --suite spectra --output json");
    REQUIRE(v.exit_code == 0);
    expect_valid(v.out, "verify_result.schema.json");
    CHECK(json::parse(v.out)["pass"] == true);
}

TEST_CASE("count methods agree through the cli") {
    const auto brute = run("count --turan 3 --n 7 --q 5 --method brute --output json");
    const auto dc = run("count --turan 3 --n 7 --q 5 --method dc --output json");
    REQUIRE(brute.exit_code == 0);
    REQUIRE(dc.exit_code == 0);
    CHECK(json::parse(brute.out)["count"] == json::parse(dc.out)["count"]);
}

TEST_CASE("file input reaches the counter") {
    const std::string path = "cli_test_graph.txt";
    {
        std::ofstream f(path);
        f << "4 4\n0 1\n1 2\n2 3\n0 3\n";
    }
    const auto r = run("count --file " + path + " --q 3 --output json");
    REQUIRE(r.exit_code == 0);
    CHECK(json::parse(r.out)["count"] == "18");
    std::remove(path.c_str());
}

TEST_CASE("sweep emits the documented csv header and rows") {
    const auto r = run("sweep --turan 2 --q 3 --n 4:12:4");
    REQUIRE(r.exit_code == 0);
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "n,q,count_bits,log_rate");
    int rows = 0;
    while (std::getline(lines, line)) {
        CHECK(line.find(',') != std::string::npos);
        ++rows;
    }
    CHECK(rows == 3);
}

TEST_CASE("identical invocations produce identical bytes") {
    for (const char* args : {"solve --q 7 --s 3.5 --output json",
                             "count --turan 2 --q 4 --n 10 --output json",
                             "counterexample --s 7000 --scan --q0 99900 --output json",
                             "verify --suite spectra --output json"}) {
        CAPTURE(args);
        const auto a = run(args);
        const auto b = run(args);
        CHECK(a.exit_code == 0);
        CHECK(a.out == b.out);
    }
}

TEST_CASE("exit codes follow the contract") {
    CHECK(run("solve --q 13 --s 10").exit_code == 0);
    CHECK(run("solve --q 31 --s 2").exit_code == 2);      // out-of-range parameter
    CHECK(run("solve --q 13").exit_code == 2);            // missing required option
    CHECK(run("nonsense").exit_code == 2);                // unknown subcommand
    CHECK(run("count --file missing.txt --q 3").exit_code == 2);
    CHECK(run("count --turan 3 --q 5").exit_code == 2);   // --turan without --n
    CHECK(run("--help").exit_code == 0);
    // A counterexample report that fails its own validity flags still
    // computes; computing is success.
    CHECK(run("counterexample --s 3400 --t 13 --r 1700").exit_code == 0);
}

TEST_CASE("verify suites pass and exit zero") {
    const auto ok = run("verify --suite monotonic");
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("FAIL") == std::string::npos);
}

}  // TEST_SUITE
