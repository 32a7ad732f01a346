#include <benchmark/benchmark.h>

#include "contestopt/battery.hpp"
#include "contestopt/general_contest.hpp"
#include "contestopt/oracle.hpp"
#include "contestopt/rank_solvers.hpp"

using namespace contestopt;

static void BM_BetaTableEval(benchmark::State& state) {
    auto fam = std::make_shared<BetaFamily>(AbilityDistribution::uniform(), 5,
                                            Regime::UnitSum);
    double v = 0.0;
    for (auto _ : state) {
        v += 1e-4;
        if (v > 1.0) v = 0.0;
        benchmark::DoNotOptimize(fam->beta_j(2, v));
    }
}
BENCHMARK(BM_BetaTableEval);

static void BM_FamilyConstruction(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        BetaFamily fam(AbilityDistribution::uniform(), n, Regime::UnitSum);
        benchmark::DoNotOptimize(fam.beta_j(1, 0.5));
    }
}
BENCHMARK(BM_FamilyConstruction)->Arg(3)->Arg(5);

static void BM_LinearUpperSolve(benchmark::State& state) {
    auto fam = std::make_shared<BetaFamily>(AbilityDistribution::uniform(),
                                            static_cast<int>(state.range(0)),
                                            Regime::UnitSum);
    for (auto _ : state) {
        auto rep = optimize_linear_upper(fam, 0.160494);
        benchmark::DoNotOptimize(rep.objective);
    }
}
BENCHMARK(BM_LinearUpperSolve)->Arg(3)->Arg(5);

static void BM_GeneralLinearRegular(benchmark::State& state) {
    auto u = AbilityDistribution::uniform();
    for (auto _ : state) {
        auto c = optimize_linear_regular(u, 2, Regime::UnitSum, 0.0, 0.2);
        benchmark::DoNotOptimize(c.objective);
    }
}
BENCHMARK(BM_GeneralLinearRegular);

static void BM_Ironing(benchmark::State& state) {
    auto d = bimodal_piecewise();
    for (auto _ : state) {
        auto iv = iron(d, 0.0, 1.0, static_cast<int>(state.range(0)));
        benchmark::DoNotOptimize(iv.max_envelope_gap());
    }
}
BENCHMARK(BM_Ironing)->Arg(1024)->Arg(4096);

static void BM_IrregularSolve(benchmark::State& state) {
    auto d = bimodal_piecewise();
    const double res = 1.0 / static_cast<double>(state.range(0));
    for (auto _ : state) {
        auto c = optimize_linear_irregular(d, 2, 0.05, 0.3, res);
        benchmark::DoNotOptimize(c.objective);
    }
}
BENCHMARK(BM_IrregularSolve)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_XiLatticeOracle(benchmark::State& state) {
    auto u = AbilityDistribution::uniform();
    const auto obj = ThresholdObjective::linear(0.0, 0.2);
    for (auto _ : state) {
        auto rep = oracle::grid_optimal_xi(u, 2, obj,
                                           static_cast<int>(state.range(0)));
        benchmark::DoNotOptimize(rep.oracle_objective);
    }
}
BENCHMARK(BM_XiLatticeOracle)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
