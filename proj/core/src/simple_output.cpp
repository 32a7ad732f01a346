#include "contestopt/simple_output.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "contestopt/order_stats.hpp"
#include "contestopt/rng.hpp"

namespace contestopt {

const char* regime_name(Regime r) {
    return r == Regime::UnitSum ? "unit_sum" : "unit_range";
}

namespace {

void check_simple(int n, int j) {
    if (n < 2) throw std::invalid_argument("simple contest: n must be >= 2");
    if (j < 1 || j > n - 1)
        throw std::out_of_range("simple contest: j=" + std::to_string(j) +
                                " outside [1," + std::to_string(n - 1) + "]");
}

}  // namespace

double beta_simple(const AbilityDistribution& dist, int n, int j, Regime regime,
                   double v) {
    check_simple(n, j);
    if (!(v >= 0.0 && v <= 1.0))
        throw std::domain_error("beta_simple: v outside [0,1]");
    const double scale = (regime == Regime::UnitSum) ? 1.0 / j : 1.0;
    return scale * integrate(
                       [&](double t) { return t * order_pdf(dist, n - 1, j, t); },
                       0.0, v);
}

SimpleOutputTable::SimpleOutputTable(const AbilityDistribution& dist, int n,
                                     int j, Regime regime, int knots)
    : n_(n), j_(j), regime_(regime) {
    check_simple(n, j);
    if (knots < 16) throw std::invalid_argument("table: too few knots");

    const double scale = (regime == Regime::UnitSum) ? 1.0 / j : 1.0;
    const auto integrand = [&](double t) {
        return t * order_pdf(dist, n - 1, j, t);
    };

    // Uniform grid plus the density breakpoints, so kinks of the integrand
    // land on knots and the cubic stays accurate across them.
    std::vector<double> xs;
    xs.reserve(knots + 8);
    for (int i = 0; i <= knots; ++i)
        xs.push_back(static_cast<double>(i) / knots);
    for (double b : dist.density_breakpoints())
        if (b > 0.0 && b < 1.0) xs.push_back(b);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end(),
                         [](double a, double b) { return b - a < 1e-12; }),
             xs.end());

    std::vector<double> ys(xs.size());
    ys[0] = 0.0;
    for (size_t i = 1; i < xs.size(); ++i)
        ys[i] = ys[i - 1] +
                scale * integrate(integrand, xs[i - 1], xs[i], 1e-13, 24);
    top_ = ys.back();
    interp_ = PiecewiseMonotoneCubic(xs, ys, dist.density_breakpoints());

    // Interpolation error budget against direct quadrature.
    Xoshiro256 rng(0x5EEDBA5EDC0FFEEULL, static_cast<uint64_t>(n * 64 + j));
    for (int i = 0; i < 64; ++i) {
        const double v = rng.next_double();
        const double direct = beta_simple(dist, n, j, regime, v);
        if (std::abs(direct - interp_(v)) > 1e-8)
            throw std::logic_error("SimpleOutputTable: interpolation error "
                                   "exceeds 1e-8 budget");
    }
}

double SimpleOutputTable::operator()(double v) const {
    if (v <= 0.0) return 0.0;
    if (v >= 1.0) return top_;
    return std::max(0.0, interp_(v));
}

std::optional<double> SimpleOutputTable::inverse(double B) const {
    if (B <= 0.0) return 0.0;
    if (top_ < B) return std::nullopt;
    return bisect_min_above([this](double v) { return (*this)(v); }, 0.0, 1.0,
                            B);
}

BetaFamily::BetaFamily(AbilityDistribution dist, int n, Regime regime,
                       int knots)
    : dist_(std::move(dist)), n_(n), regime_(regime) {
    if (n < 2) throw std::invalid_argument("BetaFamily: n must be >= 2");
    tables_.reserve(n - 1);
    for (int j = 1; j <= n - 1; ++j)
        tables_.emplace_back(dist_, n, j, regime, knots);
}

const SimpleOutputTable& BetaFamily::table(int j) const {
    if (j < 1 || j > n_ - 1)
        throw std::out_of_range("BetaFamily: j outside [1,n-1]");
    return tables_[j - 1];
}

double BetaFamily::beta(const std::vector<double>& alpha, double v) const {
    if (static_cast<int>(alpha.size()) != n_ - 1)
        throw std::invalid_argument("BetaFamily: alpha size must be n-1");
    double s = 0.0;
    for (int j = 1; j <= n_ - 1; ++j)
        if (alpha[j - 1] != 0.0) s += alpha[j - 1] * tables_[j - 1](v);
    return s;
}

std::optional<double> BetaFamily::inverse(const std::vector<double>& alpha,
                                          double B) const {
    if (B <= 0.0) return 0.0;
    if (beta(alpha, 1.0) < B) return std::nullopt;
    return bisect_min_above([&](double v) { return beta(alpha, v); }, 0.0, 1.0,
                            B);
}

}  // namespace contestopt
