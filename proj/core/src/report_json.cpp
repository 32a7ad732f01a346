#include "contestopt/report_json.hpp"

namespace contestopt {

using nlohmann::json;

json to_json(const SolveReport& r) {
    json j;
    j["objective"] = r.objective;
    j["alpha"] = r.alpha;
    j["prizes"] = r.prizes;
    j["support"] = r.support;
    if (r.V_L) j["V_L"] = *r.V_L;
    if (r.V_H) j["V_H"] = *r.V_H;
    if (r.j_star) j["j_star"] = *r.j_star;
    if (r.infeasible) j["infeasible"] = true;
    if (r.tie) j["tie"] = true;
    if (r.oracle_gap) j["oracle_gap"] = *r.oracle_gap;
    if (!r.warnings.empty()) j["warnings"] = r.warnings;
    return j;
}

json to_json(const GeneralContest& c) {
    json j;
    j["kind"] = general_kind_name(c.kind);
    j["n"] = c.n;
    j["regime"] = regime_name(c.regime);
    j["objective"] = c.objective;
    if (c.xi.V_L) j["V_L"] = *c.xi.V_L;
    if (c.xi.V_H) j["V_H"] = *c.xi.V_H;
    if (c.V_low) j["V_low"] = *c.V_low;
    if (c.V_mid) j["V_mid"] = *c.V_mid;
    if (c.V_up) j["V_up"] = *c.V_up;
    if (c.corner_case) j["corner_case"] = true;
    if (c.experimental) j["experimental"] = true;
    json segs = json::array();
    for (const auto& s : c.xi.pieces()) {
        json seg;
        seg["lo"] = s.lo;
        seg["hi"] = s.hi;
        switch (s.form) {
            case SegForm::Zero:
                seg["form"] = "zero";
                break;
            case SegForm::CdfPower:
                seg["form"] = "cdf_power";
                break;
            case SegForm::Constant:
                seg["form"] = "constant";
                seg["c"] = s.c;
                break;
            case SegForm::IronedFlat:
                seg["form"] = "ironed_flat";
                seg["c"] = s.c;
                seg["source"] = {s.src_l, s.src_r};
                break;
        }
        segs.push_back(seg);
    }
    j["xi_segments"] = segs;
    return j;
}

json to_json(const oracle::OracleReport& r) {
    json j;
    j["oracle_objective"] = r.oracle_objective;
    j["solver_objective"] = r.solver_objective;
    j["gap"] = r.gap;
    j["resolution"] = r.resolution;
    j["samples"] = r.samples;
    j["regret"] = r.regret;
    j["std_error"] = r.std_error;
    j["seed"] = r.seed;
    if (r.reserve) j["reserve"] = *r.reserve;
    return j;
}

json to_json(const BatteryRow& row) {
    json j;
    j["dist"] = row.dist_name;
    j["n"] = row.n;
    j["objective"] = row.objective;
    j["solver_objective"] = row.solver_objective;
    j["oracle_objective"] = row.oracle_objective;
    j["gap"] = row.gap;
    j["regret"] = row.regret;
    j["simple_ratio"] = row.simple_ratio;
    return j;
}

AbilityDistribution distribution_from_json(const json& spec) {
    if (!spec.is_object() || !spec.contains("kind"))
        throw std::invalid_argument("distribution spec: missing \"kind\"");
    const std::string kind = spec.at("kind").get<std::string>();
    for (const auto& [key, val] : spec.items()) {
        (void)val;
        if (key != "kind" && key != "k" && key != "points" &&
            key != "components")
            throw std::invalid_argument("distribution spec: unknown key \"" +
                                        key + "\"");
    }
    if (kind == "uniform") return AbilityDistribution::uniform();
    if (kind == "power")
        return AbilityDistribution::power(spec.at("k").get<double>());
    if (kind == "piecewise_cdf") {
        std::vector<std::pair<double, double>> pts;
        for (const auto& p : spec.at("points"))
            pts.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
        return AbilityDistribution::piecewise_cdf(std::move(pts));
    }
    if (kind == "mixture") {
        std::vector<std::pair<double, AbilityDistribution>> comps;
        for (const auto& c : spec.at("components"))
            comps.emplace_back(c.at(0).get<double>(),
                               distribution_from_json(c.at(1)));
        return AbilityDistribution::mixture(std::move(comps));
    }
    throw std::invalid_argument("distribution spec: unknown kind \"" + kind +
                                "\"");
}

json distribution_to_json(const AbilityDistribution& dist) {
    json j;
    switch (dist.kind()) {
        case DistKind::Uniform:
            j["kind"] = "uniform";
            break;
        case DistKind::Power:
            j["kind"] = "power";
            j["k"] = dist.power_exponent();
            break;
        case DistKind::PiecewiseLinearCdf: {
            j["kind"] = "piecewise_cdf";
            json pts = json::array();
            for (const auto& [v, F] : dist.breakpoints())
                pts.push_back({v, F});
            j["points"] = pts;
            break;
        }
        case DistKind::Mixture: {
            j["kind"] = "mixture";
            json comps = json::array();
            for (const auto& c : dist.components())
                comps.push_back({c.weight, distribution_to_json(*c.dist)});
            j["components"] = comps;
            break;
        }
    }
    return j;
}

}  // namespace contestopt
