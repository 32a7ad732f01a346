#pragma once

#include "contestopt/distribution.hpp"

namespace contestopt {

// P(ability v ranks j-th highest among n iid draws):
//   C(n-1, j-1) F(v)^{n-j} (1-F(v))^{j-1}
double rank_prob(const AbilityDistribution& dist, int n, int j, double v);

// Density of the j-th highest order statistic of n iid draws.
double order_pdf(const AbilityDistribution& dist, int n, int j, double v);

// Expected prize share of one player when the prize is split equally among
// all players falling in (a, b], for abilities iid F conditioned on landing
// there: (F(b)^n - F(a)^n) / (n (F(b) - F(a))).
double expected_equal_split(const AbilityDistribution& dist, int n, double a,
                            double b);

// Same, directly from CDF values.
double expected_equal_split_cdf(double Fa, double Fb, int n);

double binomial_coefficient(int n, int k);

}  // namespace contestopt
