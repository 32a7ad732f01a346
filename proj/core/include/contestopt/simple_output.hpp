#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "contestopt/distribution.hpp"
#include "contestopt/numerics.hpp"

namespace contestopt {

enum class Regime { UnitSum, UnitRange };

const char* regime_name(Regime r);

// Output function of the simple contest at rank j:
//   unit-sum:   beta_Sj(v) = (1/j) int_0^v t f_{n-1,j}(t) dt
//   unit-range: beta_Rj(v) = j * beta_Sj(v)
// Direct quadrature; the cached table below is the fast path.
double beta_simple(const AbilityDistribution& dist, int n, int j, Regime regime,
                   double v);

// Cached beta_j on a fixed grid with monotone cubic interpolation. The
// interpolation error budget (1e-8) is enforced at construction against
// direct quadrature on pseudo-random probe points.
class SimpleOutputTable {
public:
    SimpleOutputTable(const AbilityDistribution& dist, int n, int j,
                      Regime regime, int knots = 2048);

    double operator()(double v) const;
    double at_one() const { return top_; }
    // min v with beta_j(v) >= B; nullopt when beta_j(1) < B (above range).
    std::optional<double> inverse(double B) const;

    int n() const { return n_; }
    int j() const { return j_; }
    Regime regime() const { return regime_; }

private:
    int n_, j_;
    Regime regime_;
    double top_;
    PiecewiseMonotoneCubic interp_;
};

// The n-1 simple-output tables for one (dist, n, regime). Immutable and
// shareable; everything rank-order is built on top of it.
class BetaFamily {
public:
    BetaFamily(AbilityDistribution dist, int n, Regime regime,
               int knots = 2048);

    const AbilityDistribution& dist() const { return dist_; }
    int n() const { return n_; }
    Regime regime() const { return regime_; }

    const SimpleOutputTable& table(int j) const;
    double beta_j(int j, double v) const { return table(j)(v); }
    std::optional<double> inverse_j(int j, double B) const {
        return table(j).inverse(B);
    }

    // beta(v) = sum_j alpha_j beta_j(v)
    double beta(const std::vector<double>& alpha, double v) const;
    std::optional<double> inverse(const std::vector<double>& alpha,
                                  double B) const;

private:
    AbilityDistribution dist_;
    int n_;
    Regime regime_;
    std::vector<SimpleOutputTable> tables_;
};

}  // namespace contestopt
