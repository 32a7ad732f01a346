#include "contestopt/order_stats.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace contestopt {

double binomial_coefficient(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

namespace {

void check_rank(int n, int j) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (j < 1 || j > n)
        throw std::out_of_range("rank j=" + std::to_string(j) +
                                " outside [1," + std::to_string(n) + "]");
}

}  // namespace

double rank_prob(const AbilityDistribution& dist, int n, int j, double v) {
    check_rank(n, j);
    const auto [F, f] = dist.evaluate(v);
    (void)f;
    return binomial_coefficient(n - 1, j - 1) * std::pow(F, n - j) *
           std::pow(1.0 - F, j - 1);
}

double order_pdf(const AbilityDistribution& dist, int n, int j, double v) {
    check_rank(n, j);
    const auto [F, f] = dist.evaluate(v);
    double c = binomial_coefficient(n, j) * j;  // n! / ((j-1)!(n-j)!)
    return c * std::pow(F, n - j) * std::pow(1.0 - F, j - 1) * f;
}

double expected_equal_split_cdf(double Fa, double Fb, int n) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    const double dF = Fb - Fa;
    if (dF <= 0.0)
        throw std::invalid_argument("expected_equal_split: F(b) must exceed F(a)");
    // (Fb^n - Fa^n) / (n dF) in a cancellation-friendly form:
    // sum_{k=0}^{n-1} Fa^{n-1-k} Fb^k / n
    double s = 0.0;
    for (int k = 0; k < n; ++k)
        s += std::pow(Fa, n - 1 - k) * std::pow(Fb, k);
    return s / n;
}

double expected_equal_split(const AbilityDistribution& dist, int n, double a,
                            double b) {
    if (!(0.0 <= a && a < b && b <= 1.0))
        throw std::invalid_argument("expected_equal_split: need 0 <= a < b <= 1");
    return expected_equal_split_cdf(dist.cdf(a), dist.cdf(b), n);
}

}  // namespace contestopt
