#pragma once

#include <optional>
#include <vector>

#include "contestopt/distribution.hpp"
#include "contestopt/simple_output.hpp"

namespace contestopt {

// eta(x) = (1 - x^n) / (n (1 - x)), evaluated in the stable polynomial form
// (1/n) sum_{k<n} x^k. Non-decreasing, eta(1) = 1, x^{n-1} <= eta(x) <= 1.
double eta(double x, int n);

enum class SegForm { Zero, CdfPower, Constant, IronedFlat };

struct XiSegment {
    double lo = 0.0;
    double hi = 0.0;
    SegForm form = SegForm::Zero;
    double c = 0.0;       // Constant / IronedFlat level
    double src_l = 0.0;   // IronedFlat source interval
    double src_r = 0.0;
};

// Symbolic piecewise expected allocation xi: [0,1] -> [0,1]. Segment
// antiderivatives are exact where the distribution allows, so Matthews
// checks and beta integrals avoid quadrature.
class ExpectedAllocation {
public:
    ExpectedAllocation(AbilityDistribution dist, int n, Regime regime,
                       std::vector<XiSegment> pieces);

    const AbilityDistribution& dist() const { return dist_; }
    int n() const { return n_; }
    Regime regime() const { return regime_; }
    const std::vector<XiSegment>& pieces() const { return pieces_; }

    std::optional<double> V_L;  // reserve ability
    std::optional<double> V_H;  // saturation ability

    double xi(double v) const;            // right-continuous
    double xi_left(double v) const;       // left limit
    double area(double a, double b) const;  // int xi dv
    double mass(double a, double b) const;  // int xi f dv

    // Equilibrium output beta(v) = v xi(v) - int_0^v xi; beta(0) = 0,
    // non-decreasing for monotone xi.
    double output(double v) const;
    // min v with beta(v) >= B; nullopt when beta(1) < B.
    std::optional<double> output_inverse(double B) const;

    // True when xi is non-decreasing within 'tol' across all boundaries.
    bool is_monotone(double tol = 1e-9) const;

private:
    AbilityDistribution dist_;
    int n_;
    Regime regime_;
    std::vector<XiSegment> pieces_;
    std::vector<double> prefix_area_;  // int_0^{lo_i} xi dv
    std::vector<double> prefix_mass_;  // int_0^{lo_i} xi f dv

    size_t locate(double v) const;
    double seg_value(const XiSegment& s, double v) const;
    double seg_area(const XiSegment& s, double a, double b) const;
    double seg_mass(const XiSegment& s, double a, double b) const;
};

struct MatthewsReport {
    bool feasible = true;
    double worst_slack = 0.0;  // max over V of (int_V^1 xi f - (1-F^n)/n)
    double at = 0.0;
};

// Checks int_V^1 xi f dv <= (1 - F(V)^n)/n + 1e-8 on a grid of V values.
MatthewsReport matthews_feasible(const ExpectedAllocation& xi, int grid = 1001);

// Designer linear-threshold value of the contest induced by xi:
// B_L F(V_L^b) + int beta f + B_H (1 - F(V_H^b)) with the crossing points of
// beta at the thresholds.
double linear_objective(const ExpectedAllocation& xi, double B_L, double B_H);

}  // namespace contestopt
