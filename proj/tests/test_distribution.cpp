#include <doctest.h>

#include <cmath>

#include "contestopt/battery.hpp"
#include "contestopt/distribution.hpp"
#include "contestopt/numerics.hpp"

using namespace contestopt;

TEST_CASE("evaluate: cdf and density") {
    auto u = AbilityDistribution::uniform();
    auto [F, f] = u.evaluate(0.3);
    CHECK(F == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(f == doctest::Approx(1.0).epsilon(1e-12));

    auto p2 = AbilityDistribution::power(2.0);
    auto [F2, f2] = p2.evaluate(0.5);
    CHECK(F2 == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(f2 == doctest::Approx(1.0).epsilon(1e-12));

    auto pw = AbilityDistribution::piecewise_cdf(
        {{0.0, 0.0}, {0.5, 0.8}, {1.0, 1.0}});
    auto [F3, f3] = pw.evaluate(0.25);
    CHECK(F3 == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(f3 == doctest::Approx(1.6).epsilon(1e-12));
    // right-limit density at the breakpoint
    CHECK(pw.evaluate(0.5).second == doctest::Approx(0.4).epsilon(1e-12));

    CHECK_THROWS_AS(u.evaluate(1.5), std::domain_error);
    CHECK_THROWS_AS(u.evaluate(-0.1), std::domain_error);
}

TEST_CASE("density integrates to one") {
    const auto dists = {AbilityDistribution::uniform(),
                        AbilityDistribution::power(2.0),
                        AbilityDistribution::power(0.5), bimodal_piecewise(),
                        AbilityDistribution::mixture(
                            {{0.5, AbilityDistribution::power(8.0)},
                             {0.5, AbilityDistribution::uniform()}})};
    for (const auto& d : dists) {
        const double total =
            integrate([&](double v) { return d.pdf(v); }, 0.0, 1.0);
        CHECK(std::abs(total - 1.0) <= 1e-8);
        CHECK(d.cdf(0.0) == 0.0);
        CHECK(d.cdf(1.0) == 1.0);
    }
}

TEST_CASE("quantile inverts the cdf") {
    const auto dists = {AbilityDistribution::uniform(),
                        AbilityDistribution::power(3.0), bimodal_piecewise(),
                        AbilityDistribution::mixture(
                            {{0.25, AbilityDistribution::power(2.0)},
                             {0.75, AbilityDistribution::uniform()}})};
    for (const auto& d : dists) {
        for (int i = 0; i <= 1000; ++i) {
            const double v = i / 1000.0;
            if (d.pdf(v) <= 1e-6) continue;
            CHECK(std::abs(d.quantile(d.cdf(v)) - v) <= 1e-8);
        }
    }
}

TEST_CASE("virtual ability") {
    auto u = AbilityDistribution::uniform();
    CHECK(u.virtual_ability(0.75) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(u.virtual_ability(0.5) == doctest::Approx(0.0).epsilon(1e-12));

    auto p2 = AbilityDistribution::power(2.0);
    CHECK(p2.virtual_ability(0.5) == doctest::Approx(-0.25).epsilon(1e-12));

    // f(0) = 0 for power k>1: singular
    CHECK_THROWS_AS(p2.virtual_ability(0.0), SingularDensityError);
}

TEST_CASE("interval virtual ability") {
    auto u = AbilityDistribution::uniform();
    CHECK(u.interval_virtual(1.0, 0.6) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(u.interval_virtual(0.8, 0.6) == doctest::Approx(0.4).epsilon(1e-12));
    // u == v collapses to v
    auto p2 = AbilityDistribution::power(2.0);
    CHECK(p2.interval_virtual(0.7, 0.7) == doctest::Approx(0.7).epsilon(1e-12));
    CHECK_THROWS_AS(u.interval_virtual(0.3, 0.6), std::invalid_argument);
}

TEST_CASE("regularity scan") {
    CHECK(AbilityDistribution::uniform().is_regular().regular);
    CHECK(AbilityDistribution::power(2.0).is_regular().regular);

    // Non-decreasing density implies psi' = 2 + (1-F) f'/f^2 >= 2, so this
    // mixture is regular even though it looks lopsided.
    auto mix = AbilityDistribution::mixture(
        {{0.5, AbilityDistribution::power(8.0)},
         {0.5, AbilityDistribution::uniform()}});
    CHECK(mix.is_regular().regular);

    // The bimodal piecewise cdf drops psi from ~0.23 to -0.8 at v = 0.4.
    auto rep = bimodal_piecewise().is_regular();
    CHECK_FALSE(rep.regular);
    CHECK(rep.violation_point > 0.35);
    CHECK(rep.violation_point < 0.45);

    // A density valley also breaks regularity.
    auto valley = AbilityDistribution::mixture(
        {{0.5, AbilityDistribution::power(0.25)},
         {0.5, AbilityDistribution::power(8.0)}});
    CHECK_FALSE(valley.is_regular().regular);
}

TEST_CASE("cdf powers integrate exactly") {
    const auto dists = {AbilityDistribution::uniform(),
                        AbilityDistribution::power(2.0), bimodal_piecewise()};
    for (const auto& d : dists) {
        for (int m : {1, 2, 4}) {
            const double direct = integrate(
                [&](double v) { return std::pow(d.cdf(v), m); }, 0.1, 0.9);
            CHECK(std::abs(d.cdf_power_integral(0.1, 0.9, m) - direct) <= 1e-9);
        }
    }
}

TEST_CASE("constructor validation") {
    CHECK_THROWS_AS(AbilityDistribution::power(0.0), std::invalid_argument);
    CHECK_THROWS_AS(
        AbilityDistribution::piecewise_cdf({{0.0, 0.0}, {0.6, 0.5}}),
        std::invalid_argument);
    CHECK_THROWS_AS(AbilityDistribution::piecewise_cdf(
                        {{0.0, 0.0}, {0.5, 0.8}, {0.4, 0.9}, {1.0, 1.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(AbilityDistribution::mixture(
                        {{0.7, AbilityDistribution::uniform()}}),
                    std::invalid_argument);
}
