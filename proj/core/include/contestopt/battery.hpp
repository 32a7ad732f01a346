#pragma once

#include <string>
#include <vector>

#include "contestopt/oracle.hpp"
#include "contestopt/rank_solvers.hpp"

namespace contestopt {

// One instance of the standard battery: {uniform, power(2), bimodal
// piecewise} x n in {2,3,5} x {binary(.05), binary(.1), linear(0,.1),
// linear(.02,.1)}, unit-sum.
struct BatteryInstance {
    std::string dist_name;
    AbilityDistribution dist;
    int n;
    ThresholdObjective objective;
};

std::vector<BatteryInstance> standard_battery();

AbilityDistribution bimodal_piecewise();

struct BatteryRow {
    std::string dist_name;
    int n = 0;
    std::string objective;
    double solver_objective = 0.0;
    double oracle_objective = 0.0;
    double gap = 0.0;           // solver - oracle
    double regret = 0.0;        // equilibrium best-response regret
    double simple_ratio = 1.0;  // solver / best simple contest
};

struct BatteryOptions {
    double alpha_resolution = 0.02;
    long regret_samples = 10000;
    int deviation_grid = 200;
    uint64_t seed = 1;
    bool run_regret = true;
};

// Runs the rank solver appropriate for each objective, certifies against
// grid_optimal_alpha, and measures equilibrium regret.
std::vector<BatteryRow> run_standard_battery(const BatteryOptions& opt);

}  // namespace contestopt
