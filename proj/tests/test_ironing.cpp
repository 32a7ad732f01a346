#include <doctest.h>

#include <cmath>

#include "contestopt/battery.hpp"
#include "contestopt/ironing.hpp"

using namespace contestopt;

namespace {

// Reference lower hull (the ironing step itself), used as the independent
// oracle for the envelope.
std::vector<double> lower_hull_values(const std::vector<double>& y,
                                      const std::vector<double>& H) {
    std::vector<size_t> hull;
    for (size_t i = 0; i < y.size(); ++i) {
        while (hull.size() >= 2) {
            const size_t a = hull[hull.size() - 2], b = hull.back();
            if ((y[b] - y[a]) * (H[i] - H[a]) -
                    (H[b] - H[a]) * (y[i] - y[a]) <=
                0.0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(i);
    }
    std::vector<double> out(y.size());
    size_t e = 0;
    for (size_t i = 0; i < y.size(); ++i) {
        while (e + 2 < hull.size() && y[hull[e + 1]] <= y[i]) ++e;
        const size_t a = hull[e], b = hull[e + 1];
        out[i] = H[a] + (H[b] - H[a]) * (y[i] - y[a]) / (y[b] - y[a]);
    }
    return out;
}

}  // namespace

TEST_CASE("regular distribution irons to itself") {
    auto iv = iron(AbilityDistribution::uniform(), 0.0, 1.0);
    CHECK(iv.max_envelope_gap() <= 1e-9);
    CHECK(iv.flat_segments().empty());
    // psibar equals psi at interior points
    auto u = AbilityDistribution::uniform();
    for (double v : {0.1, 0.33, 0.5, 0.77, 0.95})
        CHECK(std::abs(iv.psibar(v) - u.virtual_ability(v)) <= 1e-6);

    auto iv2 = iron(AbilityDistribution::power(2.0), 0.0, 1.0);
    CHECK(iv2.max_envelope_gap() <= 1e-8);
}

TEST_CASE("endpoint equality holds exactly") {
    for (const auto& d : {bimodal_piecewise(), AbilityDistribution::power(2.0)}) {
        for (auto [U, V] : {std::pair{0.0, 1.0}, std::pair{0.2, 0.9}}) {
            auto iv = iron(d, U, V, 1024);
            CHECK(std::abs(iv.knot_H().front() - iv.knot_Hbar().front()) <=
                  1e-10);
            CHECK(std::abs(iv.knot_H().back() - iv.knot_Hbar().back()) <=
                  1e-10);
        }
    }
}

TEST_CASE("bimodal distribution gets a flat segment") {
    auto iv = iron(bimodal_piecewise(), 0.0, 1.0);
    REQUIRE(!iv.flat_segments().empty());
    const auto& hb = iv.knot_hbar();
    for (size_t i = 1; i < hb.size(); ++i) CHECK(hb[i] >= hb[i - 1] - 1e-12);

    // The flat spans the psi dip around [0.27, 0.60].
    const auto& f = iv.flat_segments().front();
    CHECK(f.l == doctest::Approx(0.272).epsilon(0.02));
    CHECK(f.r == doctest::Approx(0.600).epsilon(0.02));

    // Envelope is the hull: re-hulling Hbar reproduces it (idempotence).
    const auto again = lower_hull_values(iv.knot_y(), iv.knot_Hbar());
    double worst = 0.0;
    for (size_t i = 0; i < again.size(); ++i)
        worst = std::max(worst, std::abs(again[i] - iv.knot_Hbar()[i]));
    CHECK(worst <= 1e-8);

    // Envelope below H everywhere, and matches the independent hull oracle.
    const auto oracle_vals = lower_hull_values(iv.knot_y(), iv.knot_H());
    for (size_t i = 0; i < oracle_vals.size(); ++i) {
        CHECK(iv.knot_Hbar()[i] <= iv.knot_H()[i] + 1e-12);
        CHECK(std::abs(oracle_vals[i] - iv.knot_Hbar()[i]) <= 1e-10);
    }
}

TEST_CASE("flat endpoints share the ironed virtual value") {
    auto iv = iron(bimodal_piecewise(), 0.0, 1.0);
    for (const auto& f : iv.flat_segments()) {
        const double mid = 0.5 * (f.l + f.r);
        CHECK(iv.left_of(mid) == doctest::Approx(f.l).epsilon(1e-9));
        CHECK(iv.right_of(mid) == doctest::Approx(f.r).epsilon(1e-9));
        CHECK(std::abs(iv.psibar(f.l) - iv.psibar(mid)) <= 1e-8);
        CHECK(std::abs(iv.psibar(f.r) - iv.psibar(mid)) <= 1e-8);
        CHECK(iv.left_of(mid) <= mid);
        CHECK(iv.right_of(mid) >= mid);
    }
}

TEST_CASE("iron validates input") {
    auto u = AbilityDistribution::uniform();
    CHECK_THROWS_AS(iron(u, 0.5, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(iron(u, 0.0, 1.0, 4), std::invalid_argument);
}
