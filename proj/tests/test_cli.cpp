#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

using json = nlohmann::json;

namespace {

const std::string kCli = CONTESTOPT_CLI_PATH;
const std::string kSchema = CONTESTOPT_SCHEMA_PATH;

struct RunResult {
    int exit_code;
    std::string out;
    std::string err;
};

RunResult run(const std::string& args) {
    const std::string out_file = "cli_test_stdout.txt";
    const std::string err_file = "cli_test_stderr.txt";
    const std::string cmd =
        kCli + " " + args + " > " + out_file + " 2> " + err_file;
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(status);
    std::stringstream so, se;
    so << std::ifstream(out_file).rdbuf();
    se << std::ifstream(err_file).rdbuf();
    r.out = so.str();
    r.err = se.str();
    return r;
}

void write_config(const std::string& path, const std::string& content) {
    std::ofstream f(path);
    f << content;
}

// Minimal JSON-Schema checker covering the subset the shipped schema uses:
// type, properties, required, items, enum, $ref into definitions.
class MiniSchema {
public:
    explicit MiniSchema(json schema) : root_(std::move(schema)) {}

    bool validate(const json& doc) const { return check(doc, root_); }

private:
    json root_;

    const json& resolve(const json& node) const {
        if (node.contains("$ref")) {
            std::string ref = node.at("$ref").get<std::string>();
            // only "#/definitions/<name>"
            const std::string prefix = "#/definitions/";
            REQUIRE(ref.rfind(prefix, 0) == 0);
            return root_.at("definitions").at(ref.substr(prefix.size()));
        }
        return node;
    }

    bool check(const json& doc, const json& raw_schema) const {
        const json& schema = resolve(raw_schema);
        if (schema.contains("enum")) {
            bool any = false;
            for (const auto& v : schema.at("enum"))
                if (v == doc) any = true;
            if (!any) return false;
        }
        if (schema.contains("type")) {
            const std::string t = schema.at("type").get<std::string>();
            if (t == "object" && !doc.is_object()) return false;
            if (t == "array" && !doc.is_array()) return false;
            if (t == "string" && !doc.is_string()) return false;
            if (t == "number" && !doc.is_number()) return false;
            if (t == "integer" && !doc.is_number_integer() &&
                !(doc.is_number_unsigned()))
                return false;
            if (t == "boolean" && !doc.is_boolean()) return false;
        }
        if (doc.is_object()) {
            if (schema.contains("required"))
                for (const auto& k : schema.at("required"))
                    if (!doc.contains(k.get<std::string>())) return false;
            if (schema.contains("properties"))
                for (const auto& [k, sub] : schema.at("properties").items())
                    if (doc.contains(k) && !check(doc.at(k), sub)) return false;
        }
        if (doc.is_array() && schema.contains("items"))
            for (const auto& el : doc)
                if (!check(el, schema.at("items"))) return false;
        return true;
    }
};

const char* kPaperExampleConfig = R"({
  // the worked uniform n=3 instance
  "distribution": {"kind": "uniform"},
  "n": 3,
  "regime": "unit_sum",
  "objective": {"kind": "linear", "B_L": 0.0, "B_H": 0.160494},
  "solver": "rank-linear",
  "output": {"report": "report.json"}
})";

}  // namespace

TEST_CASE("solve reproduces the worked example") {
    write_config("cfg_example.json", kPaperExampleConfig);
    auto r = run("solve --config cfg_example.json --out .");
    CHECK(r.exit_code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc.at("solve").at("objective").get<double>() ==
          doctest::Approx(0.0864).epsilon(1e-3));
}

TEST_CASE("reports validate against the shipped schema") {
    std::ifstream sf(kSchema);
    REQUIRE(sf.good());
    json schema;
    sf >> schema;
    MiniSchema checker(schema);

    write_config("cfg_example.json", kPaperExampleConfig);
    auto r = run("solve --config cfg_example.json --out .");
    REQUIRE(r.exit_code == 0);
    CHECK(checker.validate(json::parse(r.out)));

    write_config("cfg_gen.json", R"({
      "distribution": {"kind": "uniform"}, "n": 2, "regime": "unit_sum",
      "objective": {"kind": "binary", "B": 0.25},
      "solver": "general-binary",
      "oracle": {"kind": "grid_xi", "cells": 64}
    })");
    auto r2 = run("solve --config cfg_gen.json --out .");
    REQUIRE(r2.exit_code == 0);
    CHECK(checker.validate(json::parse(r2.out)));
}

TEST_CASE("invalid threshold ordering exits 1 naming the constraint") {
    write_config("cfg_bad.json", R"({
      "distribution": {"kind": "uniform"}, "n": 3, "regime": "unit_sum",
      "objective": {"kind": "linear", "B_L": 0.5, "B_H": 0.2},
      "solver": "rank-linear"
    })");
    auto r = run("solve --config cfg_bad.json --out .");
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("B_L < B_H") != std::string::npos);
}

TEST_CASE("unknown config keys are rejected with a line anchor") {
    write_config("cfg_unknown.json", R"({
      "distribution": {"kind": "uniform"},
      "n": 3,
      "wat": true,
      "objective": {"kind": "total"},
      "solver": "rank-total"
    })");
    auto r = run("solve --config cfg_unknown.json --out .");
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("wat") != std::string::npos);
    CHECK(r.err.find("line 4") != std::string::npos);
}

TEST_CASE("tampered oracle tolerance forces certification failure") {
    write_config("cfg_tol0.json", R"({
      "distribution": {"kind": "uniform"}, "n": 3, "regime": "unit_sum",
      "objective": {"kind": "linear", "B_L": 0.0, "B_H": 0.160494},
      "solver": "rank-linear",
      "oracle": {"kind": "regret", "samples": 2000, "tolerance": 0.0}
    })");
    auto r = run("verify --config cfg_tol0.json --out .");
    CHECK(r.exit_code == 2);
}

TEST_CASE("verify certifies the example against the alpha lattice") {
    write_config("cfg_verify.json", R"({
      "distribution": {"kind": "uniform"}, "n": 3, "regime": "unit_sum",
      "objective": {"kind": "linear", "B_L": 0.0, "B_H": 0.160494},
      "solver": "rank-linear",
      "oracle": {"kind": "grid_alpha", "resolution": 0.05}
    })");
    auto r = run("verify --config cfg_verify.json --out .");
    CHECK(r.exit_code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc.at("certified").get<bool>());
    CHECK(doc.at("oracle").at("gap").get<double>() >= -1e-4);
}

TEST_CASE("determinism: identical config and seed give identical bytes") {
    write_config("cfg_det.json", R"({
      "distribution": {"kind": "power", "k": 2.0}, "n": 3,
      "regime": "unit_sum",
      "objective": {"kind": "linear", "B_L": 0.0, "B_H": 0.1},
      "solver": "rank-linear",
      "oracle": {"kind": "mc", "samples": 20000, "seed": 42}
    })");
    auto r1 = run("solve --config cfg_det.json --out .");
    auto r2 = run("solve --config cfg_det.json --out .");
    CHECK(r1.exit_code == 0);
    CHECK(r1.out == r2.out);
    // and thread count does not change results
    auto r3 = run("--threads 1 solve --config cfg_det.json --out .");
    CHECK(r3.out == r1.out);
}

TEST_CASE("curve subcommand writes the point grid") {
    write_config("cfg_curve.json", R"({
      "distribution": {"kind": "uniform"}, "n": 2, "regime": "unit_sum",
      "objective": {"kind": "linear", "B_L": 0.0, "B_H": 1.0},
      "solver": "general-linear",
      "output": {"curve": "curve_test.csv"}
    })");
    auto r = run("curve --config cfg_curve.json --out .");
    CHECK(r.exit_code == 0);
    std::ifstream csv("curve_test.csv");
    REQUIRE(csv.good());
    std::string header;
    std::getline(csv, header);
    CHECK(header == "v,F,f,beta,xi,psi");
    int lines = 0;
    std::string line;
    while (std::getline(csv, line))
        if (!line.empty()) ++lines;
    CHECK(lines == 1001);
}

TEST_CASE("allocate applies the runtime rule") {
    write_config("cfg_alloc.json", R"({
      "distribution": {"kind": "uniform"}, "n": 2, "regime": "unit_sum",
      "objective": {"kind": "linear", "B_L": 0.0, "B_H": 1.0},
      "solver": "general-linear"
    })");
    auto r = run("allocate --config cfg_alloc.json --out . "
                 "--profile 0.7 0.3");
    CHECK(r.exit_code == 0);
    const json doc = json::parse(r.out);
    const auto shares = doc.at("allocations").at(0);
    CHECK(shares.at(0).get<double>() == doctest::Approx(1.0));
    CHECK(shares.at(1).get<double>() == doctest::Approx(0.0));
}
