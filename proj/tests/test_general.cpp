#include <doctest.h>

#include <cmath>

#include "contestopt/allocation_rules.hpp"
#include "contestopt/battery.hpp"
#include "contestopt/numerics.hpp"
#include "contestopt/oracle.hpp"
#include "contestopt/rng.hpp"

using namespace contestopt;

TEST_CASE("eta") {
    CHECK(eta(1.0, 3) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(eta(0.0, 4) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(eta(0.5, 2) == doctest::Approx(0.75).epsilon(1e-15));
    for (int n : {2, 3, 6}) {
        double prev = 0.0;
        for (int i = 0; i <= 100; ++i) {
            const double x = i / 100.0;
            const double e = eta(x, n);
            CHECK(e >= std::pow(x, n - 1) - 1e-12);
            CHECK(e <= 1.0 + 1e-12);
            CHECK(e >= prev - 1e-12);
            prev = e;
        }
    }
}

TEST_CASE("output from allocation") {
    auto u = AbilityDistribution::uniform();
    // step at B: beta(v) = B above the reserve
    ExpectedAllocation step(u, 2, Regime::UnitRange,
                            {{0.0, 0.4, SegForm::Zero, 0, 0, 0},
                             {0.4, 1.0, SegForm::Constant, 1.0, 0, 0}});
    CHECK(step.output(0.0) == 0.0);
    CHECK(step.output(0.2) == 0.0);
    for (double v : {0.4, 0.6, 1.0})
        CHECK(step.output(v) == doctest::Approx(0.4).epsilon(1e-12));

    // highest-wins for uniform n=2: beta(v) = v^2/2
    ExpectedAllocation hw(u, 2, Regime::UnitSum,
                          {{0.0, 1.0, SegForm::CdfPower, 0, 0, 0}});
    for (double v : {0.3, 0.7, 1.0})
        CHECK(hw.output(v) == doctest::Approx(v * v / 2).epsilon(1e-12));
}

TEST_CASE("matthews feasibility") {
    auto u = AbilityDistribution::uniform();
    ExpectedAllocation hw(u, 2, Regime::UnitSum,
                          {{0.0, 1.0, SegForm::CdfPower, 0, 0, 0}});
    auto m1 = matthews_feasible(hw);
    CHECK(m1.feasible);
    CHECK(std::abs(m1.worst_slack) <= 1e-9);  // tight at every V

    ExpectedAllocation ones(u, 2, Regime::UnitSum,
                            {{0.0, 1.0, SegForm::Constant, 1.0, 0, 0}});
    auto m2 = matthews_feasible(ones);
    CHECK_FALSE(m2.feasible);
    CHECK(m2.worst_slack == doctest::Approx(0.5).epsilon(1e-6));  // at V=0

    // equal split above V0: feasible and tight at V0
    const double V0 = 0.3;
    ExpectedAllocation es(
        u, 3, Regime::UnitSum,
        {{0.0, V0, SegForm::Zero, 0, 0, 0},
         {V0, 1.0, SegForm::Constant, eta(u.cdf(V0), 3), 0, 0}});
    auto m3 = matthews_feasible(es);
    CHECK(m3.feasible);
    const double slack_at_V0 =
        es.mass(V0, 1.0) - (1.0 - std::pow(u.cdf(V0), 3)) / 3;
    CHECK(std::abs(slack_at_V0) <= 1e-9);
}

TEST_CASE("binary general contest") {
    auto u = AbilityDistribution::uniform();
    // unit-range: reserve exactly B, output B above
    auto cr = optimize_binary_general(u, 3, Regime::UnitRange, 0.4);
    CHECK(*cr.xi.V_L == doctest::Approx(0.4).epsilon(1e-12));
    for (int i = 0; i <= 100; ++i) {
        const double v = 0.4 + 0.6 * i / 100.0;
        CHECK(std::abs(cr.output(v) - 0.4) <= 1e-8);
    }

    // unit-sum: V solves V (1+V)/2 = 1/4, i.e. V = (sqrt(3)-1)/2
    auto cs = optimize_binary_general(u, 2, Regime::UnitSum, 0.25);
    const double V = *cs.xi.V_L;
    CHECK(V == doctest::Approx((std::sqrt(3.0) - 1) / 2).epsilon(1e-9));
    CHECK(std::abs(0.25 - V * eta(u.cdf(V), 2)) <= 1e-10);
    CHECK(matthews_feasible(cs.xi).feasible);

    CHECK_THROWS_AS(optimize_binary_general(u, 2, Regime::UnitSum, 1.0),
                    InfeasibleError);
    CHECK_THROWS_AS(optimize_binary_general(u, 2, Regime::UnitRange, 1.5),
                    InfeasibleError);
}

TEST_CASE("linear regular contest, unit-range") {
    auto u = AbilityDistribution::uniform();
    auto c1 = optimize_linear_regular(u, 3, Regime::UnitRange, 0.2, 0.9);
    CHECK(*c1.xi.V_L == doctest::Approx(0.6).epsilon(1e-6));

    auto c2 = optimize_linear_regular(u, 3, Regime::UnitRange, 0.8, 0.85);
    CHECK(*c2.xi.V_L == doctest::Approx(0.85).epsilon(1e-9));

    CHECK_THROWS_AS(
        optimize_linear_regular(bimodal_piecewise(), 2, Regime::UnitSum, 0.0, 0.5),
        std::domain_error);
}

TEST_CASE("linear regular contest, unit-sum") {
    auto u = AbilityDistribution::uniform();
    // Myerson degenerate case: reserve 0.5, highest wins above it
    auto c = optimize_linear_regular(u, 2, Regime::UnitSum, 0.0, 1.0);
    CHECK(*c.xi.V_L == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(c.kind == GeneralKind::LinearRegularSumNoSat);
    CHECK(matthews_feasible(c.xi).feasible);

    // saturated instance: scan must beat the paper's stationary point
    // (uniform n=2, B_L=0, B_H=0.2: optimum 0.13922 at V_L=0.2726,
    // V_H=0.3257; the dropped-jump-term point scores 0.13696)
    auto cs = optimize_linear_regular(u, 2, Regime::UnitSum, 0.0, 0.2);
    CHECK(cs.kind == GeneralKind::LinearRegularSumSat);
    CHECK(cs.objective == doctest::Approx(0.1392163).epsilon(1e-4));
    CHECK(*cs.xi.V_L == doctest::Approx(0.2726).epsilon(5e-3));
    CHECK(*cs.xi.V_H == doctest::Approx(0.3257).epsilon(5e-3));
    CHECK(cs.output(1.0) <= 0.2 + 1e-8);
    CHECK(matthews_feasible(cs.xi).feasible);

    // upper threshold cap and Myerson monotonicity hold on a grid
    for (const auto* contest : {&c, &cs}) {
        double prev = 0.0;
        for (int i = 0; i <= 1000; ++i) {
            const double b = contest->output(i / 1000.0);
            CHECK(b >= prev - 1e-6);
            prev = b;
        }
    }

    // right-packing: tight interim allocation on [V_L, V_H)
    {
        const double lo = *cs.xi.V_L;
        const double hi = *cs.xi.V_H;
        for (int i = 0; i < 10; ++i) {
            const double v = lo + (hi - lo) * i / 10.0;
            const double lhs = cs.xi.mass(v, 1.0);
            const double rhs = (1.0 - std::pow(u.cdf(v), 2)) / 2;
            CHECK(std::abs(lhs - rhs) <= 1e-6);
        }
    }
}

TEST_CASE("irregular solver matches the regular one on regular input") {
    auto u = AbilityDistribution::uniform();
    auto reg = optimize_linear_regular(u, 2, Regime::UnitSum, 0.0, 1.0);
    auto irr = optimize_linear_irregular(u, 2, 0.0, 1.0, 1.0 / 64);
    CHECK(std::abs(irr.objective - reg.objective) <= 2.0 / 64);

    auto reg2 = optimize_linear_regular(u, 2, Regime::UnitSum, 0.0, 0.2);
    auto irr2 = optimize_linear_irregular(u, 2, 0.0, 0.2, 1.0 / 64);
    CHECK(std::abs(irr2.objective - reg2.objective) <= 2.0 / 64);
    CHECK(irr2.output(1.0) <= 0.2 + 1e-8);
}

TEST_CASE("irregular solver on the bimodal distribution") {
    auto d = bimodal_piecewise();
    auto c = optimize_linear_irregular(d, 2, 0.05, 0.3, 1.0 / 64);
    CHECK(matthews_feasible(c.xi).feasible);
    CHECK(c.output(1.0) <= 0.3 + 1e-8);

    // beats the lattice oracle
    auto orc = oracle::grid_optimal_xi(
        d, 2, ThresholdObjective::linear(0.05, 0.3), 64);
    CHECK(c.objective >= orc.oracle_objective - 2e-3);

    // returned xi constant on each ironed flat of the returned band ironing
    REQUIRE(c.ironed_band != nullptr);
    for (const auto& f : c.ironed_band->flat_segments()) {
        const double x0 = c.xi.xi(0.5 * (f.l + f.r));
        for (int i = 1; i < 8; ++i) {
            const double v = f.l + (f.r - f.l) * i / 8.0;
            CHECK(std::abs(c.xi.xi(v) - x0) <= 1e-9);
        }
    }

    // Myerson monotone output
    double prev = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        const double b = c.output(i / 1000.0);
        CHECK(b >= prev - 1e-6);
        prev = b;
    }
}

TEST_CASE("allocation rules") {
    auto u = AbilityDistribution::uniform();
    auto nosat = optimize_linear_regular(u, 2, Regime::UnitSum, 0.0, 1.0);
    CHECK(allocation_rule(nosat, {0.7, 0.3}) ==
          std::vector<double>{1.0, 0.0});
    CHECK(allocation_rule(nosat, {0.1, 0.3}) ==
          std::vector<double>{0.0, 0.0});

    auto sat = optimize_linear_regular(u, 2, Regime::UnitSum, 0.0, 0.2);
    const double VH = *sat.xi.V_H;
    auto shares = allocation_rule(sat, {VH + 0.1, VH + 0.05});
    CHECK(shares[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(shares[1] == doctest::Approx(0.5).epsilon(1e-12));

    // symmetry
    auto s1 = allocation_rule(sat, {0.2, 0.9});
    auto s2 = allocation_rule(sat, {0.9, 0.2});
    CHECK(s1[0] == s2[1]);
    CHECK(s1[1] == s2[0]);

    CHECK_THROWS_AS(allocation_rule(sat, {0.5}), std::invalid_argument);
}

TEST_CASE("allocation rule recovers the expected allocation") {
    auto u = AbilityDistribution::uniform();
    const int n = 3;
    auto contest = optimize_linear_regular(u, n, Regime::UnitSum, 0.0, 0.15);
    Xoshiro256 rng(99);
    const int profiles = 100000;
    for (double v : {0.1, 0.35, 0.55, 0.8, 0.97}) {
        double mean = 0.0, m2 = 0.0;
        for (int t = 0; t < profiles; ++t) {
            std::vector<double> prof(n);
            prof[0] = v;
            for (int i = 1; i < n; ++i)
                prof[i] = u.quantile(rng.next_double());
            const double x = allocation_rule(contest, prof)[0];
            const double delta = x - mean;
            mean += delta / (t + 1);
            m2 += delta * (x - mean);
        }
        const double se = std::sqrt(m2 / profiles / profiles);
        CHECK(std::abs(mean - contest.xi.xi(v)) <= 3.0 * se + 1e-4);
    }
}

TEST_CASE("output space rule branches") {
    auto u = AbilityDistribution::uniform();
    auto sat = optimize_linear_regular(u, 2, Regime::UnitSum, 0.0, 0.2);
    const double VL = *sat.xi.V_L, VH = *sat.xi.V_H;
    const double t_lo = u.cdf(VL);   // F(V_L)^{n-1}, n=2
    const double t_hi = u.cdf(VH);
    const double cap = eta(u.cdf(VH), 2);
    CHECK(output_space_rule(sat, t_lo / 2) == 0.0);
    CHECK(output_space_rule(sat, (t_lo + t_hi) / 2) ==
          doctest::Approx((t_lo + t_hi) / 2).epsilon(1e-12));
    CHECK(output_space_rule(sat, (t_hi + cap) / 2) ==
          doctest::Approx(t_hi).epsilon(1e-12));
    CHECK(output_space_rule(sat, cap + 0.1) ==
          doctest::Approx(cap).epsilon(1e-12));
    CHECK_THROWS_AS(output_space_rule(sat, -0.1), std::domain_error);
}

TEST_CASE("output-based allocation agrees with ability-based allocation") {
    auto u = AbilityDistribution::uniform();
    auto sat = optimize_linear_regular(u, 2, Regime::UnitSum, 0.0, 0.2);
    Xoshiro256 rng(123);
    for (int t = 0; t < 200; ++t) {
        std::vector<double> prof = {rng.next_double(), rng.next_double()};
        std::vector<double> outs = {sat.output(prof[0]), sat.output(prof[1])};
        const auto via_v = allocation_rule(sat, prof);
        const auto via_b = allocation_from_outputs(sat, outs);
        for (int i = 0; i < 2; ++i)
            CHECK(std::abs(via_v[i] - via_b[i]) <= 1e-9);
    }
}

TEST_CASE("unit-range irregular reduction is flagged experimental") {
    auto d = bimodal_piecewise();
    auto c = optimize_linear_irregular_range(d, 0.1, 0.5, 1.0 / 32);
    CHECK(c.experimental);
    CHECK(c.regime == Regime::UnitRange);
    CHECK(c.output(1.0) <= 0.5 + 1e-8);
    // xi within [0,1] is the whole unit-range feasibility story
    for (int i = 0; i <= 100; ++i) {
        const double x = c.xi.xi(i / 100.0);
        CHECK(x >= -1e-12);
        CHECK(x <= 1.0 + 1e-12);
    }
}
