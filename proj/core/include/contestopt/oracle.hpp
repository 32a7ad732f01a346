#pragma once

#include <cstdint>
#include <optional>

#include "contestopt/general_contest.hpp"
#include "contestopt/rank_contest.hpp"

namespace contestopt {
namespace oracle {

struct OracleReport {
    double oracle_objective = 0.0;
    double solver_objective = 0.0;
    double gap = 0.0;  // solver - oracle, signed
    double resolution = 0.0;
    long samples = 0;
    double regret = 0.0;
    double std_error = 0.0;
    uint64_t seed = 0;
    std::optional<double> reserve;  // lattice-xi oracle: first positive cell

    OracleReport& with_solver(double solver) {
        solver_objective = solver;
        gap = solver - oracle_objective;
        return *this;
    }
};

// Exhaustive scan of the alpha simplex on a resolution lattice.
// Budget error when the lattice exceeds 1e7 points.
OracleReport grid_optimal_alpha(const std::shared_ptr<const BetaFamily>& family,
                                const ThresholdObjective& objective,
                                double resolution);

// Discretized-xi optimum: non-decreasing step xi on equal-probability cells,
// 64 quantized levels, Matthews-constrained; deterministic multistart
// lattice ascent (greedy Matthews-tight fills per reserve cell followed by
// local moves to a local optimum).
OracleReport grid_optimal_xi(const AbilityDistribution& dist, int n,
                             const ThresholdObjective& objective, int cells);

// Best-response regret of the symmetric strategy beta + strategy_offset in a
// rank-order contest: sampled abilities against a deviation grid, win
// probabilities from output-CDF powers with equal-split tie shares.
OracleReport best_response_regret(const RankContest& contest, long samples,
                                  int deviation_grid, uint64_t seed,
                                  double strategy_offset = 0.0);

// Monte-Carlo designer objective of a rank contest.
OracleReport mc_objective(const RankContest& contest,
                          const ThresholdObjective& objective, long samples,
                          uint64_t seed);
// Monte-Carlo designer objective of a general contest (through xi's beta).
OracleReport mc_objective(const GeneralContest& contest,
                          const ThresholdObjective& objective, long samples,
                          uint64_t seed);

}  // namespace oracle
}  // namespace contestopt
