#include "contestopt/battery.hpp"

#include <algorithm>

namespace contestopt {

AbilityDistribution bimodal_piecewise() {
    return AbilityDistribution::piecewise_cdf(
        {{0.0, 0.0}, {0.4, 0.7}, {0.6, 0.75}, {1.0, 1.0}});
}

std::vector<BatteryInstance> standard_battery() {
    std::vector<std::pair<std::string, AbilityDistribution>> dists;
    dists.emplace_back("uniform", AbilityDistribution::uniform());
    dists.emplace_back("power2", AbilityDistribution::power(2.0));
    dists.emplace_back("bimodal", bimodal_piecewise());

    std::vector<ThresholdObjective> objectives = {
        ThresholdObjective::binary(0.05),
        ThresholdObjective::binary(0.1),
        ThresholdObjective::linear(0.0, 0.1),
        ThresholdObjective::linear(0.02, 0.1),
    };

    std::vector<BatteryInstance> out;
    for (const auto& [name, d] : dists)
        for (int n : {2, 3, 5})
            for (const auto& obj : objectives)
                out.push_back({name, d, n, obj});
    return out;
}

std::vector<BatteryRow> run_standard_battery(const BatteryOptions& opt) {
    std::vector<BatteryRow> rows;
    for (const auto& inst : standard_battery()) {
        auto family = std::make_shared<BetaFamily>(inst.dist, inst.n,
                                                   Regime::UnitSum);
        SolveReport solved;
        switch (inst.objective.kind) {
            case ThresholdObjective::Kind::Binary:
                solved = optimize_binary(family, inst.objective.B);
                break;
            case ThresholdObjective::Kind::Linear:
                solved = (inst.objective.B_L == 0.0)
                             ? optimize_linear_upper(family, inst.objective.B_H)
                             : optimize_linear_full(family, inst.objective.B_L,
                                                    inst.objective.B_H);
                break;
            default:
                solved = optimize_total(family);
        }
        auto orc = oracle::grid_optimal_alpha(family, inst.objective,
                                              opt.alpha_resolution)
                       .with_solver(solved.objective);

        BatteryRow row;
        row.dist_name = inst.dist_name;
        row.n = inst.n;
        row.objective = inst.objective.name();
        row.solver_objective = solved.objective;
        row.oracle_objective = orc.oracle_objective;
        row.gap = orc.gap;

        double best_simple = 0.0;
        for (int j = 1; j <= inst.n - 1; ++j) {
            std::vector<double> a(inst.n - 1, 0.0);
            a[j - 1] = 1.0;
            best_simple = std::max(
                best_simple,
                eval_objective(RankContest(family, a), inst.objective));
        }
        row.simple_ratio =
            best_simple > 0.0 ? row.solver_objective / best_simple : 1.0;

        if (opt.run_regret && !solved.infeasible) {
            RankContest winner(family, solved.alpha);
            row.regret = oracle::best_response_regret(
                             winner, opt.regret_samples, opt.deviation_grid,
                             opt.seed)
                             .regret;
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace contestopt
