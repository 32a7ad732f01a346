#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "contestopt/simple_output.hpp"

namespace contestopt {

enum class TransformShape { Convex, Concave };

// Designer objective. Binary pays 1 per player with output >= B; Linear pays
// linearly between B_L and B_H (per-player normalized form
// E[max(B_L, min(B_H, beta))]); TotalOutput is E[beta]; Transformed is
// E[h(beta)] for a monotone h of declared shape.
struct ThresholdObjective {
    enum class Kind { Binary, Linear, TotalOutput, Transformed };

    Kind kind = Kind::TotalOutput;
    double B = 0.0;
    double B_L = 0.0;
    double B_H = 1.0;
    std::function<double(double)> h;
    TransformShape shape = TransformShape::Concave;

    static ThresholdObjective binary(double B);
    static ThresholdObjective linear(double B_L, double B_H);
    static ThresholdObjective total_output();
    static ThresholdObjective transformed(std::function<double(double)> h,
                                          TransformShape shape);

    std::string name() const;
};

// Rank-order contest in mixture coordinates alpha over the n-1 simple
// contests, bound to a BetaFamily (distribution, n, regime).
class RankContest {
public:
    RankContest(std::shared_ptr<const BetaFamily> family,
                std::vector<double> alpha);

    static RankContest from_alpha(std::shared_ptr<const BetaFamily> family,
                                  std::vector<double> alpha);
    // w_n is forced to 0. Throws naming the violated regime constraint.
    static RankContest from_prizes(std::shared_ptr<const BetaFamily> family,
                                   std::vector<double> prizes);

    const BetaFamily& family() const { return *family_; }
    std::shared_ptr<const BetaFamily> family_ptr() const { return family_; }
    int n() const { return family_->n(); }
    Regime regime() const { return family_->regime(); }
    const std::vector<double>& alpha() const { return alpha_; }
    std::vector<double> prizes() const;

    // Equilibrium output beta(v) = sum_j alpha_j beta_j(v).
    double output(double v) const { return family_->beta(alpha_, v); }
    // min v with beta(v) >= B; nullopt = above range.
    std::optional<double> inverse_output(double B) const {
        return family_->inverse(alpha_, B);
    }

private:
    std::shared_ptr<const BetaFamily> family_;
    std::vector<double> alpha_;
};

// Designer objective value of a rank contest (quadrature).
double eval_objective(const RankContest& contest,
                      const ThresholdObjective& objective);

// Solver output.
struct SolveReport {
    double objective = 0.0;
    std::vector<double> alpha;
    std::vector<double> prizes;
    std::vector<int> support;        // indices j with alpha_j > 0
    std::optional<double> V_L;
    std::optional<double> V_H;
    std::optional<int> j_star;
    bool infeasible = false;
    bool tie = false;                // equal-scoring support within 1e-9
    std::optional<double> oracle_gap;
    std::vector<std::string> warnings;
};

}  // namespace contestopt
