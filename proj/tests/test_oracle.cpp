#include <doctest.h>

#include <cmath>

#include "contestopt/battery.hpp"
#include "contestopt/general_contest.hpp"
#include "contestopt/numerics.hpp"
#include "contestopt/oracle.hpp"
#include "contestopt/rank_solvers.hpp"

using namespace contestopt;
using namespace contestopt::oracle;

namespace {
constexpr double kBH = 13.0 / 81.0;
}

TEST_CASE("alpha lattice oracle") {
    auto fam = std::make_shared<BetaFamily>(AbilityDistribution::uniform(), 3,
                                            Regime::UnitSum);
    auto rep = grid_optimal_alpha(fam, ThresholdObjective::linear(0.0, kBH),
                                  0.05);
    CHECK(rep.oracle_objective == doctest::Approx(0.0864).epsilon(1.5e-2));
    CHECK(rep.oracle_objective <= 0.086420 + 1e-9);  // lattice lower-bounds

    // binary objective: the lattice picks the corner matching j*
    auto repb = grid_optimal_alpha(fam, ThresholdObjective::binary(0.1), 0.05);
    auto solved = optimize_binary(fam, 0.1);
    CHECK(std::abs(repb.oracle_objective - solved.objective) <= 1e-9);

    // n=2: plain 1-D scan
    auto fam2 = std::make_shared<BetaFamily>(AbilityDistribution::uniform(), 2,
                                             Regime::UnitSum);
    auto rep2 =
        grid_optimal_alpha(fam2, ThresholdObjective::linear(0.0, 0.3), 0.05);
    const double direct = eval_objective(RankContest(fam2, {1.0}),
                                         ThresholdObjective::linear(0.0, 0.3));
    CHECK(rep2.oracle_objective == doctest::Approx(direct).epsilon(1e-9));

    CHECK_THROWS_AS(grid_optimal_alpha(fam, ThresholdObjective::binary(0.1),
                                       1.0 / 500),
                    std::invalid_argument);
}

TEST_CASE("xi lattice oracle") {
    auto u = AbilityDistribution::uniform();
    // binary: reserve within one cell of (sqrt(3)-1)/2
    auto rb = grid_optimal_xi(u, 2, ThresholdObjective::binary(0.25), 128);
    REQUIRE(rb.reserve.has_value());
    CHECK(std::abs(*rb.reserve - 0.3660254) <= 1.0 / 128 + 1e-9);

    // Myerson degenerate: reserve within one cell of 0.5
    auto rl = grid_optimal_xi(u, 2, ThresholdObjective::linear(0.0, 1.0), 128);
    REQUIRE(rl.reserve.has_value());
    CHECK(std::abs(*rl.reserve - 0.5) <= 1.0 / 128 + 1e-9);
    // close to (and below) the continuum optimum 5/24
    auto reg = optimize_linear_regular(u, 2, Regime::UnitSum, 0.0, 1.0);
    CHECK(rl.oracle_objective <= reg.objective + 1e-9);
    CHECK(rl.oracle_objective >= reg.objective - 0.01);

    // n=1 reduction equals the unit-range solver at lattice accuracy
    auto r1 = grid_optimal_xi(u, 1, ThresholdObjective::linear(0.0, 1.0), 128);
    auto range = optimize_linear_regular(u, 1, Regime::UnitRange, 0.0, 1.0);
    CHECK(std::abs(r1.oracle_objective - range.objective) <= 0.02);

    CHECK_THROWS_AS(
        grid_optimal_xi(u, 2, ThresholdObjective::binary(0.25), 1024),
        std::invalid_argument);
}

TEST_CASE("best response regret certifies equilibria") {
    auto fam2 = std::make_shared<BetaFamily>(AbilityDistribution::uniform(), 2,
                                             Regime::UnitSum);
    RankContest wta(fam2, {1.0});  // classical all-pay: beta(v) = v^2/2
    CHECK(wta.output(0.8) == doctest::Approx(0.32).epsilon(1e-8));

    auto rep = best_response_regret(wta, 10000, 200, 7);
    CHECK(rep.regret <= 5e-3);

    // an upward-shifted strategy is detectably not an equilibrium
    auto bad = best_response_regret(wta, 10000, 200, 7, 0.05);
    CHECK(bad.regret >= 1e-2);

    CHECK_THROWS_AS(best_response_regret(wta, 10, 200, 7),
                    std::invalid_argument);
}

TEST_CASE("monte carlo objective") {
    auto fam = std::make_shared<BetaFamily>(AbilityDistribution::uniform(), 3,
                                            Regime::UnitSum);
    RankContest mixed(fam, {0.5, 0.5});
    const auto obj = ThresholdObjective::linear(0.0, kBH);
    auto rep = mc_objective(mixed, obj, 100000, 17);
    CHECK(std::abs(rep.oracle_objective - 0.0864198) <=
          3.0 * rep.std_error + 1e-6);

    // binary estimate is the indicator mean, equal to 1 - F(inverse)
    const auto objb = ThresholdObjective::binary(0.05);
    auto repb = mc_objective(mixed, objb, 100000, 17);
    const double exact = eval_objective(mixed, objb);
    CHECK(std::abs(repb.oracle_objective - exact) <= 3.0 * repb.std_error);

    // determinism: same seed, same estimate, bit for bit
    auto again = mc_objective(mixed, obj, 100000, 17);
    CHECK(again.oracle_objective == rep.oracle_objective);
    auto other = mc_objective(mixed, obj, 100000, 18);
    CHECK(other.oracle_objective != rep.oracle_objective);
}

TEST_CASE("mc objective is unbiased across seeds") {
    auto fam = std::make_shared<BetaFamily>(AbilityDistribution::uniform(), 3,
                                            Regime::UnitSum);
    RankContest mixed(fam, {0.5, 0.5});
    const auto obj = ThresholdObjective::linear(0.0, kBH);
    const double exact = eval_objective(mixed, obj);
    int hits = 0;
    for (uint64_t seed = 1; seed <= 100; ++seed) {
        auto rep = mc_objective(mixed, obj, 4000, seed);
        if (std::abs(rep.oracle_objective - exact) <= 3.0 * rep.std_error)
            ++hits;
    }
    CHECK(hits >= 95);
}

TEST_CASE("solver dominates its oracle on a spot battery") {
    // tiny slice of the standard battery (the acceptance suite runs it all)
    auto fam = std::make_shared<BetaFamily>(bimodal_piecewise(), 3,
                                            Regime::UnitSum);
    const auto obj = ThresholdObjective::linear(0.0, 0.1);
    auto solved = optimize_linear_upper(fam, 0.1);
    auto orc = grid_optimal_alpha(fam, obj, 0.05).with_solver(solved.objective);
    CHECK(orc.gap >= -1e-4);
}
