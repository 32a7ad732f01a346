// contestopt: solve and certify designer-optimal contests from a JSON config.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "contestopt/allocation_rules.hpp"
#include "contestopt/battery.hpp"
#include "contestopt/general_contest.hpp"
#include "contestopt/oracle.hpp"
#include "contestopt/order_stats.hpp"
#include "contestopt/parallel.hpp"
#include "contestopt/rank_solvers.hpp"
#include "contestopt/report_json.hpp"

using json = nlohmann::json;
using namespace contestopt;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitCertification = 2;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int line_of_offset(const std::string& text, size_t offset) {
    int line = 1;
    for (size_t i = 0; i < offset && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

int line_of_key(const std::string& text, const std::string& key) {
    const auto pos = text.find("\"" + key + "\"");
    return pos == std::string::npos ? 1 : line_of_offset(text, pos);
}

void require_keys(const json& obj, const std::string& where,
                  const std::vector<std::string>& allowed,
                  const std::string& raw) {
    for (const auto& [key, val] : obj.items()) {
        (void)val;
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError(where + ": unknown key \"" + key + "\" (line " +
                              std::to_string(line_of_key(raw, key)) + ")");
    }
}

struct RunConfig {
    AbilityDistribution dist = AbilityDistribution::uniform();
    int n = 2;
    Regime regime = Regime::UnitSum;
    ThresholdObjective objective = ThresholdObjective::total_output();
    std::string solver;
    double search_resolution = 1.0 / 256;
    // oracle block
    bool has_oracle = false;
    std::string oracle_kind;
    double oracle_resolution = 0.02;
    int oracle_cells = 128;
    long oracle_samples = 100000;
    uint64_t seed = 1;
    std::optional<double> oracle_tolerance;
    // output block
    std::string report_name = "report.json";
    std::string curve_name = "curve.csv";
    json raw;
};

ThresholdObjective parse_objective(const json& j, const std::string& raw) {
    require_keys(j, "objective", {"kind", "B", "B_L", "B_H", "transform"}, raw);
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "binary") return ThresholdObjective::binary(j.at("B").get<double>());
    if (kind == "linear")
        return ThresholdObjective::linear(j.at("B_L").get<double>(),
                                          j.at("B_H").get<double>());
    if (kind == "total") return ThresholdObjective::total_output();
    if (kind == "transformed") {
        const auto& t = j.at("transform");
        require_keys(t, "transform", {"type", "p", "B"}, raw);
        const std::string type = t.at("type").get<std::string>();
        if (type == "power") {
            const double p = t.at("p").get<double>();
            if (!(p > 0.0)) throw ConfigError("transform: p must be > 0");
            return ThresholdObjective::transformed(
                [p](double x) { return std::pow(x, p); },
                p >= 1.0 ? TransformShape::Convex : TransformShape::Concave);
        }
        if (type == "cap") {
            const double B = t.at("B").get<double>();
            return ThresholdObjective::transformed(
                [B](double x) { return std::min(x, B); },
                TransformShape::Concave);
        }
        throw ConfigError("transform: unknown type \"" + type + "\"");
    }
    throw ConfigError("objective: unknown kind \"" + kind + "\"");
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string raw = buf.str();

    json j;
    try {
        j = json::parse(raw, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError("config parse error at line " +
                          std::to_string(line_of_offset(raw, e.byte)) + ": " +
                          e.what());
    }

    require_keys(j, "config",
                 {"distribution", "n", "regime", "objective", "solver",
                  "search_resolution", "oracle", "output", "seed"},
                 raw);

    RunConfig cfg;
    cfg.raw = j;
    try {
        cfg.dist = distribution_from_json(j.at("distribution"));
    } catch (const std::exception& e) {
        throw ConfigError(std::string("distribution (line ") +
                          std::to_string(line_of_key(raw, "distribution")) +
                          "): " + e.what());
    }
    cfg.n = j.value("n", 2);
    if (cfg.n < 1) throw ConfigError("n must be >= 1");
    const std::string regime = j.value("regime", "unit_sum");
    if (regime == "unit_sum")
        cfg.regime = Regime::UnitSum;
    else if (regime == "unit_range")
        cfg.regime = Regime::UnitRange;
    else
        throw ConfigError("regime must be unit_sum or unit_range (line " +
                          std::to_string(line_of_key(raw, "regime")) + ")");
    if (!j.contains("objective"))
        throw ConfigError("config: missing \"objective\"");
    try {
        cfg.objective = parse_objective(j.at("objective"), raw);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("objective (line ") +
                          std::to_string(line_of_key(raw, "objective")) +
                          "): " + e.what());
    }
    cfg.solver = j.value("solver", std::string());
    cfg.search_resolution = j.value("search_resolution", 1.0 / 256);
    cfg.seed = j.value("seed", uint64_t{1});
    if (j.contains("oracle")) {
        const auto& o = j.at("oracle");
        require_keys(o, "oracle",
                     {"kind", "resolution", "cells", "samples", "seed",
                      "tolerance"},
                     raw);
        cfg.has_oracle = true;
        cfg.oracle_kind = o.at("kind").get<std::string>();
        cfg.oracle_resolution = o.value("resolution", 0.02);
        cfg.oracle_cells = o.value("cells", 128);
        cfg.oracle_samples = o.value("samples", long{100000});
        cfg.seed = o.value("seed", cfg.seed);
        if (o.contains("tolerance"))
            cfg.oracle_tolerance = o.at("tolerance").get<double>();
    }
    if (j.contains("output")) {
        const auto& o = j.at("output");
        require_keys(o, "output", {"report", "curve"}, raw);
        cfg.report_name = o.value("report", cfg.report_name);
        cfg.curve_name = o.value("curve", cfg.curve_name);
    }
    return cfg;
}

bool is_rank_solver(const std::string& s) { return s.rfind("rank-", 0) == 0; }

struct Solution {
    std::optional<SolveReport> rank;
    std::optional<RankContest> rank_contest;
    std::optional<GeneralContest> general;
    double objective = 0.0;
};

Solution run_solver(const RunConfig& cfg) {
    Solution sol;
    const auto& obj = cfg.objective;
    if (is_rank_solver(cfg.solver)) {
        auto family =
            std::make_shared<BetaFamily>(cfg.dist, cfg.n, cfg.regime);
        SolveReport rep;
        if (cfg.solver == "rank-binary") {
            if (obj.kind != ThresholdObjective::Kind::Binary)
                throw ConfigError("rank-binary requires a binary objective");
            rep = optimize_binary(family, obj.B);
        } else if (cfg.solver == "rank-linear") {
            if (obj.kind != ThresholdObjective::Kind::Linear)
                throw ConfigError("rank-linear requires a linear objective");
            rep = optimize_linear_full(family, obj.B_L, obj.B_H);
        } else if (cfg.solver == "rank-total") {
            rep = optimize_total(family);
        } else if (cfg.solver == "rank-transformed") {
            if (obj.kind != ThresholdObjective::Kind::Transformed)
                throw ConfigError(
                    "rank-transformed requires a transformed objective");
            rep = optimize_transformed(family, obj.h, obj.shape);
        } else {
            throw ConfigError("unknown solver \"" + cfg.solver + "\"");
        }
        sol.objective = rep.objective;
        sol.rank_contest = RankContest(family, rep.alpha);
        sol.rank = std::move(rep);
        return sol;
    }
    if (cfg.solver == "general-binary") {
        if (obj.kind != ThresholdObjective::Kind::Binary)
            throw ConfigError("general-binary requires a binary objective");
        sol.general = optimize_binary_general(cfg.dist, cfg.n, cfg.regime, obj.B);
    } else if (cfg.solver == "general-linear") {
        if (obj.kind != ThresholdObjective::Kind::Linear)
            throw ConfigError("general-linear requires a linear objective");
        sol.general =
            optimize_linear_regular(cfg.dist, cfg.n, cfg.regime, obj.B_L, obj.B_H);
    } else if (cfg.solver == "general-irregular") {
        if (obj.kind != ThresholdObjective::Kind::Linear)
            throw ConfigError("general-irregular requires a linear objective");
        sol.general =
            cfg.regime == Regime::UnitSum
                ? optimize_linear_irregular(cfg.dist, cfg.n, obj.B_L, obj.B_H,
                                            cfg.search_resolution)
                : optimize_linear_irregular_range(cfg.dist, obj.B_L, obj.B_H,
                                                  cfg.search_resolution);
    } else {
        throw ConfigError("unknown solver \"" + cfg.solver + "\"");
    }
    sol.objective = sol.general->objective;
    return sol;
}

// Runs the configured oracle; returns (report, certified).
std::pair<oracle::OracleReport, bool> run_oracle(const RunConfig& cfg,
                                                 const Solution& sol) {
    oracle::OracleReport rep;
    bool ok = true;
    if (cfg.oracle_kind == "grid_alpha") {
        if (!sol.rank_contest)
            throw ConfigError("grid_alpha oracle requires a rank solver");
        rep = oracle::grid_optimal_alpha(sol.rank_contest->family_ptr(),
                                         cfg.objective, cfg.oracle_resolution)
                  .with_solver(sol.objective);
        ok = rep.gap >= -cfg.oracle_tolerance.value_or(1e-4);
    } else if (cfg.oracle_kind == "grid_xi") {
        rep = oracle::grid_optimal_xi(cfg.dist,
                                      sol.general ? sol.general->n : cfg.n,
                                      cfg.objective, cfg.oracle_cells)
                  .with_solver(sol.objective);
        ok = rep.gap >= -cfg.oracle_tolerance.value_or(2e-3);
    } else if (cfg.oracle_kind == "regret") {
        if (!sol.rank_contest)
            throw ConfigError("regret oracle requires a rank solver");
        rep = oracle::best_response_regret(*sol.rank_contest,
                                           cfg.oracle_samples, 200, cfg.seed);
        rep.with_solver(sol.objective);
        ok = rep.regret <= cfg.oracle_tolerance.value_or(5e-3);
    } else if (cfg.oracle_kind == "mc") {
        rep = sol.rank_contest
                  ? oracle::mc_objective(*sol.rank_contest, cfg.objective,
                                         cfg.oracle_samples, cfg.seed)
                  : oracle::mc_objective(*sol.general, cfg.objective,
                                         cfg.oracle_samples, cfg.seed);
        rep.with_solver(sol.objective);
        ok = std::abs(rep.gap) <=
             cfg.oracle_tolerance.value_or(3.0 * rep.std_error + 1e-9);
    } else {
        throw ConfigError("unknown oracle kind \"" + cfg.oracle_kind + "\"");
    }
    return {rep, ok};
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write: " + path);
    out << content;
}

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

int cmd_solve(const std::string& config_path, const std::string& out_dir,
              bool verify_only) {
    const RunConfig cfg = load_config(config_path);
    if (verify_only && !cfg.has_oracle)
        throw ConfigError("verify: config has no \"oracle\" block");
    const Solution sol = run_solver(cfg);

    json doc;
    doc["command"] = verify_only ? "verify" : "solve";
    doc["config"] = cfg.raw;
    if (sol.rank) doc["solve"] = to_json(*sol.rank);
    if (sol.general) doc["general"] = to_json(*sol.general);

    bool certified = true;
    if (cfg.has_oracle) {
        auto [orep, ok] = run_oracle(cfg, sol);
        doc["oracle"] = to_json(orep);
        doc["certified"] = ok;
        certified = ok;
    }
    const std::string out = out_dir + "/" + cfg.report_name;
    write_file(out, doc.dump(2) + "\n");
    std::cout << doc.dump(2) << "\n";
    return certified ? kExitOk : kExitCertification;
}

int cmd_curve(const std::string& config_path, const std::string& out_dir) {
    const RunConfig cfg = load_config(config_path);
    const Solution sol = run_solver(cfg);

    std::ostringstream csv;
    csv << "v,F,f,beta,xi,psi\n";
    std::shared_ptr<const BetaFamily> family;
    if (sol.rank_contest) family = sol.rank_contest->family_ptr();
    for (int i = 0; i <= 1000; ++i) {
        const double v = i / 1000.0;
        const auto [F, f] = cfg.dist.evaluate(v);
        double beta, xi;
        if (sol.rank_contest) {
            beta = sol.rank_contest->output(v);
            // expected prize value at ability v
            const auto w = sol.rank_contest->prizes();
            xi = 0.0;
            for (int r = 1; r <= cfg.n; ++r)
                xi += w[r - 1] * rank_prob(cfg.dist, cfg.n, r, v);
        } else {
            beta = sol.general->output(v);
            xi = sol.general->xi.xi(v);
        }
        double psi = std::numeric_limits<double>::quiet_NaN();
        try {
            psi = cfg.dist.virtual_ability(v);
        } catch (const SingularDensityError&) {
        }
        csv << fmt17(v) << ',' << fmt17(F) << ',' << fmt17(f) << ','
            << fmt17(beta) << ',' << fmt17(xi) << ',' << fmt17(psi) << "\n";
    }
    write_file(out_dir + "/" + cfg.curve_name, csv.str());
    std::cout << "wrote " << out_dir + "/" + cfg.curve_name << "\n";
    return kExitOk;
}

int cmd_allocate(const std::string& config_path, const std::string& out_dir,
                 const std::vector<double>& profile,
                 const std::string& profiles_csv) {
    const RunConfig cfg = load_config(config_path);
    const Solution sol = run_solver(cfg);
    if (!sol.general)
        throw ConfigError("allocate requires a general-* solver");

    std::vector<std::vector<double>> profiles;
    if (!profile.empty()) profiles.push_back(profile);
    if (!profiles_csv.empty()) {
        std::ifstream in(profiles_csv);
        if (!in) throw ConfigError("cannot open profiles CSV: " + profiles_csv);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::vector<double> row;
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
            profiles.push_back(std::move(row));
        }
    }
    if (profiles.empty())
        throw ConfigError("allocate: no profile given (use --profile or --profiles)");

    json doc;
    doc["command"] = "allocate";
    doc["config"] = cfg.raw;
    doc["general"] = to_json(*sol.general);
    json allocs = json::array();
    for (const auto& p : profiles)
        allocs.push_back(allocation_rule(*sol.general, p));
    doc["allocations"] = allocs;
    write_file(out_dir + "/" + cfg.report_name, doc.dump(2) + "\n");
    std::cout << doc.dump(2) << "\n";
    return kExitOk;
}

int cmd_battery(const std::string& out_dir, double resolution, long samples,
                uint64_t seed, bool regret) {
    BatteryOptions opt;
    opt.alpha_resolution = resolution;
    opt.regret_samples = samples;
    opt.seed = seed;
    opt.run_regret = regret;
    const auto rows = run_standard_battery(opt);

    json doc;
    doc["command"] = "battery";
    json jrows = json::array();
    double worst_gap = 0.0, max_ratio = 0.0, max_regret = 0.0;
    for (const auto& r : rows) {
        jrows.push_back(to_json(r));
        worst_gap = std::min(worst_gap, r.gap);
        max_ratio = std::max(max_ratio, r.simple_ratio);
        max_regret = std::max(max_regret, r.regret);
    }
    doc["rows"] = jrows;
    doc["summary"] = {{"instances", rows.size()},
                      {"worst_gap", worst_gap},
                      {"max_simple_ratio", max_ratio},
                      {"max_regret", max_regret}};
    write_file(out_dir + "/battery.json", doc.dump(2) + "\n");
    std::cout << doc["summary"].dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "contestopt: Bayes-Nash equilibrium and designer-optimal contest "
        "solver with built-in certification oracles"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", profiles_csv;
    std::vector<double> profile;
    uint64_t seed = 1;
    int threads = 0;
    double battery_resolution = 0.02;
    long battery_samples = 10000;
    bool battery_no_regret = false;

    app.add_option("--threads", threads,
                   "worker threads (default: all cores; results do not "
                   "depend on it)");

    auto* solve = app.add_subcommand("solve", "solve a contest design problem");
    solve->add_option("--config", config_path, "JSON config")->required();
    solve->add_option("--out", out_dir, "output directory");
    solve->add_option("--seed", seed, "RNG seed override");

    auto* verify = app.add_subcommand("verify", "solve and certify via oracle");
    verify->add_option("--config", config_path, "JSON config")->required();
    verify->add_option("--out", out_dir, "output directory");
    verify->add_option("--seed", seed, "RNG seed override");

    auto* curve = app.add_subcommand("curve", "write v,F,f,beta,xi,psi CSV");
    curve->add_option("--config", config_path, "JSON config")->required();
    curve->add_option("--out", out_dir, "output directory");

    auto* allocate =
        app.add_subcommand("allocate", "ex-post prize shares for a profile");
    allocate->add_option("--config", config_path, "JSON config")->required();
    allocate->add_option("--out", out_dir, "output directory");
    allocate->add_option("--profile", profile, "ability profile (n numbers)");
    allocate->add_option("--profiles", profiles_csv, "CSV of profiles");

    auto* battery = app.add_subcommand(
        "battery", "run the standard instance battery and summarize");
    battery->add_option("--out", out_dir, "output directory");
    battery->add_option("--resolution", battery_resolution, "alpha lattice");
    battery->add_option("--samples", battery_samples, "regret samples");
    battery->add_option("--seed", seed, "RNG seed");
    battery->add_flag("--no-regret", battery_no_regret, "skip regret checks");

    CLI11_PARSE(app, argc, argv);
    if (threads > 0) set_max_threads(threads);

    try {
        if (solve->parsed()) return cmd_solve(config_path, out_dir, false);
        if (verify->parsed()) return cmd_solve(config_path, out_dir, true);
        if (curve->parsed()) return cmd_curve(config_path, out_dir);
        if (allocate->parsed())
            return cmd_allocate(config_path, out_dir, profile, profiles_csv);
        if (battery->parsed())
            return cmd_battery(out_dir, battery_resolution, battery_samples,
                               seed, !battery_no_regret);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}
