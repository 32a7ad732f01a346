#pragma once

#include <memory>

#include "contestopt/rank_contest.hpp"

namespace contestopt {

// Binary threshold: the optimum is the simple contest minimizing
// beta_j^{-1}(B); ties to the smallest j. When every beta_j(1) < B the
// objective is 0 and the report is flagged infeasible.
SolveReport optimize_binary(const std::shared_ptr<const BetaFamily>& family,
                            double B);

// Total output: unit-sum winner-take-all; unit-range argmax of
// j * int x f_{n,j+1}(x) dx, ties to the smallest j.
SolveReport optimize_total(const std::shared_ptr<const BetaFamily>& family);

// Linear threshold with B_L = 0: pair enumeration via the equal-integral
// condition int_0^V (beta_i - beta_j) f = 0, plus all simple contests.
SolveReport optimize_linear_upper(
    const std::shared_ptr<const BetaFamily>& family, double B_H);

// General linear threshold: supports of size <= 3 via the equal-integral
// conditions on [V_L, V_H] with beta(V_L)=B_L, beta(V_H)=B_H, sum alpha = 1.
SolveReport optimize_linear_full(
    const std::shared_ptr<const BetaFamily>& family, double B_L, double B_H);

// Optimal objective / best simple objective; always within [1, 2].
double simple_vs_optimal(const std::shared_ptr<const BetaFamily>& family,
                         double B_L, double B_H);

// Point where beta_i - beta_j turns positive (i < j); 1.0 when beta_i stays
// below beta_j throughout.
double crossing_point(const BetaFamily& family, int i, int j);

// Monotone transformed objectives. Convex: best simple contest. Concave:
// projected-gradient ascent over the alpha simplex with multistart.
SolveReport optimize_transformed(
    const std::shared_ptr<const BetaFamily>& family,
    const std::function<double(double)>& h, TransformShape shape);

}  // namespace contestopt
