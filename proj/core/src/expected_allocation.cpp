#include "contestopt/expected_allocation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "contestopt/numerics.hpp"

namespace contestopt {

double eta(double x, int n) {
    if (n < 1) throw std::invalid_argument("eta: n must be >= 1");
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("eta: x outside [0,1]");
    double s = 0.0, p = 1.0;
    for (int k = 0; k < n; ++k) {
        s += p;
        p *= x;
    }
    return s / n;
}

ExpectedAllocation::ExpectedAllocation(AbilityDistribution dist, int n,
                                       Regime regime,
                                       std::vector<XiSegment> pieces)
    : dist_(std::move(dist)), n_(n), regime_(regime), pieces_(std::move(pieces)) {
    if (n_ < 1) throw std::invalid_argument("ExpectedAllocation: n must be >= 1");
    if (pieces_.empty())
        throw std::invalid_argument("ExpectedAllocation: no segments");
    if (std::abs(pieces_.front().lo) > 1e-12 ||
        std::abs(pieces_.back().hi - 1.0) > 1e-12)
        throw std::invalid_argument("ExpectedAllocation: must cover [0,1]");
    pieces_.front().lo = 0.0;
    pieces_.back().hi = 1.0;
    for (size_t i = 0; i + 1 < pieces_.size(); ++i) {
        if (std::abs(pieces_[i].hi - pieces_[i + 1].lo) > 1e-12)
            throw std::invalid_argument("ExpectedAllocation: segments not contiguous");
        pieces_[i + 1].lo = pieces_[i].hi;
    }
    prefix_area_.assign(pieces_.size() + 1, 0.0);
    prefix_mass_.assign(pieces_.size() + 1, 0.0);
    for (size_t i = 0; i < pieces_.size(); ++i) {
        prefix_area_[i + 1] =
            prefix_area_[i] + seg_area(pieces_[i], pieces_[i].lo, pieces_[i].hi);
        prefix_mass_[i + 1] =
            prefix_mass_[i] + seg_mass(pieces_[i], pieces_[i].lo, pieces_[i].hi);
    }
}

size_t ExpectedAllocation::locate(double v) const {
    size_t lo = 0, hi = pieces_.size() - 1;
    while (lo < hi) {
        const size_t mid = (lo + hi) / 2;
        if (v < pieces_[mid].hi)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

double ExpectedAllocation::seg_value(const XiSegment& s, double v) const {
    switch (s.form) {
        case SegForm::Zero:
            return 0.0;
        case SegForm::CdfPower:
            return std::pow(dist_.cdf(v), n_ - 1);
        case SegForm::Constant:
        case SegForm::IronedFlat:
            return s.c;
    }
    return 0.0;
}

double ExpectedAllocation::seg_area(const XiSegment& s, double a,
                                    double b) const {
    if (b <= a) return 0.0;
    switch (s.form) {
        case SegForm::Zero:
            return 0.0;
        case SegForm::CdfPower:
            return dist_.cdf_power_integral(a, b, n_ - 1);
        case SegForm::Constant:
        case SegForm::IronedFlat:
            return s.c * (b - a);
    }
    return 0.0;
}

double ExpectedAllocation::seg_mass(const XiSegment& s, double a,
                                    double b) const {
    if (b <= a) return 0.0;
    switch (s.form) {
        case SegForm::Zero:
            return 0.0;
        case SegForm::CdfPower: {
            // int F^{n-1} f = [F^n / n]
            const double Fa = dist_.cdf(a), Fb = dist_.cdf(b);
            return (std::pow(Fb, n_) - std::pow(Fa, n_)) / n_;
        }
        case SegForm::Constant:
        case SegForm::IronedFlat:
            return s.c * (dist_.cdf(b) - dist_.cdf(a));
    }
    return 0.0;
}

double ExpectedAllocation::xi(double v) const {
    v = std::clamp(v, 0.0, 1.0);
    return seg_value(pieces_[locate(v)], v);
}

double ExpectedAllocation::xi_left(double v) const {
    v = std::clamp(v, 0.0, 1.0);
    size_t i = locate(v);
    if (i > 0 && std::abs(v - pieces_[i].lo) < 1e-15) --i;
    return seg_value(pieces_[i], v);
}

double ExpectedAllocation::area(double a, double b) const {
    if (b <= a) return 0.0;
    a = std::clamp(a, 0.0, 1.0);
    b = std::clamp(b, 0.0, 1.0);
    const size_t ia = locate(a), ib = locate(b);
    if (ia == ib) return seg_area(pieces_[ia], a, b);
    double tot = seg_area(pieces_[ia], a, pieces_[ia].hi);
    tot += prefix_area_[ib] - prefix_area_[ia + 1];
    tot += seg_area(pieces_[ib], pieces_[ib].lo, b);
    return tot;
}

double ExpectedAllocation::mass(double a, double b) const {
    if (b <= a) return 0.0;
    a = std::clamp(a, 0.0, 1.0);
    b = std::clamp(b, 0.0, 1.0);
    const size_t ia = locate(a), ib = locate(b);
    if (ia == ib) return seg_mass(pieces_[ia], a, b);
    double tot = seg_mass(pieces_[ia], a, pieces_[ia].hi);
    tot += prefix_mass_[ib] - prefix_mass_[ia + 1];
    tot += seg_mass(pieces_[ib], pieces_[ib].lo, b);
    return tot;
}

double ExpectedAllocation::output(double v) const {
    v = std::clamp(v, 0.0, 1.0);
    return v * xi(v) - area(0.0, v);
}

std::optional<double> ExpectedAllocation::output_inverse(double B) const {
    if (B <= 0.0) return 0.0;
    if (output(1.0) < B) return std::nullopt;
    return bisect_min_above([this](double v) { return output(v); }, 0.0, 1.0,
                            B);
}

bool ExpectedAllocation::is_monotone(double tol) const {
    double prev_hi = 0.0;
    for (const auto& s : pieces_) {
        const double at_lo = seg_value(s, s.lo);
        if (at_lo < prev_hi - tol) return false;
        if (at_lo < -tol || seg_value(s, s.hi) > 1.0 + tol) return false;
        prev_hi = seg_value(s, s.hi);  // all forms non-decreasing within
    }
    return true;
}

MatthewsReport matthews_feasible(const ExpectedAllocation& xi, int grid) {
    if (xi.regime() == Regime::UnitRange && xi.n() == 1) {
        // n=1 reduction: the constraint is xi <= 1, folded into is_monotone.
        MatthewsReport rep;
        rep.feasible = true;
        return rep;
    }
    MatthewsReport rep;
    rep.worst_slack = -1e300;
    const auto& d = xi.dist();
    const int n = xi.n();
    const double total = xi.mass(0.0, 1.0);
    for (int k = 0; k < grid; ++k) {
        const double V = static_cast<double>(k) / (grid - 1);
        const double lhs = total - xi.mass(0.0, V);
        const double rhs = (1.0 - std::pow(d.cdf(V), n)) / n;
        const double slack = lhs - rhs;
        if (slack > rep.worst_slack) {
            rep.worst_slack = slack;
            rep.at = V;
        }
    }
    rep.feasible = rep.worst_slack <= 1e-8;
    return rep;
}

double linear_objective(const ExpectedAllocation& xi, double B_L, double B_H) {
    const auto& d = xi.dist();
    const double VL = xi.output_inverse(B_L).value_or(1.0);
    const double VH = xi.output_inverse(B_H).value_or(1.0);
    double obj = B_L * d.cdf(VL) + B_H * (1.0 - d.cdf(VH));
    if (VH > VL)
        obj += integrate(
            [&](double v) { return xi.output(v) * d.pdf(v); }, VL, VH, 1e-11);
    return obj;
}

}  // namespace contestopt
