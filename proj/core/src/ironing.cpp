#include "contestopt/ironing.hpp"

#include <algorithm>
#include <cmath>

#include "contestopt/numerics.hpp"

namespace contestopt {

IronedVirtual::IronedVirtual(const AbilityDistribution& dist, double U,
                             double V, int knot_count)
    : U_(U), V_(V) {
    if (!(0.0 <= U && U < V && V <= 1.0))
        throw std::invalid_argument("iron: requires 0 <= U < V <= 1");
    if (knot_count < 16)
        throw std::invalid_argument("iron: knot_count must be >= 16");
    const double yU = dist.cdf(U), yV = dist.cdf(V);
    if (yV - yU <= 1e-12)
        throw SingularDensityError(U, 0.0);

    const size_t K = static_cast<size_t>(knot_count);
    y_.resize(K);
    v_.resize(K);
    H_.resize(K);
    const double FV = dist.cdf(V);
    for (size_t i = 0; i < K; ++i) {
        y_[i] = yU + (yV - yU) * static_cast<double>(i) / (K - 1);
        v_[i] = dist.quantile(y_[i]);
    }
    v_.front() = U;
    v_.back() = V;

    // H via the bounded ability-space integrand v f(v) - (F(V) - F(v)).
    const auto integrand = [&](double v) {
        return v * dist.pdf(v) - (FV - dist.cdf(v));
    };
    H_[0] = 0.0;
    for (size_t i = 1; i < K; ++i)
        H_[i] = H_[i - 1] + integrate(integrand, v_[i - 1], v_[i], 1e-14, 24);

    // Lower convex envelope (monotone chain on the sampled graph).
    hull_.clear();
    for (size_t i = 0; i < K; ++i) {
        while (hull_.size() >= 2) {
            const size_t a = hull_[hull_.size() - 2];
            const size_t b = hull_[hull_.size() - 1];
            const double cross = (y_[b] - y_[a]) * (H_[i] - H_[a]) -
                                 (H_[b] - H_[a]) * (y_[i] - y_[a]);
            if (cross <= 0.0)
                hull_.pop_back();
            else
                break;
        }
        hull_.push_back(i);
    }

    hull_slope_.resize(hull_.size() - 1);
    for (size_t e = 0; e + 1 < hull_.size(); ++e) {
        const size_t a = hull_[e], b = hull_[e + 1];
        hull_slope_[e] = (H_[b] - H_[a]) / (y_[b] - y_[a]);
    }

    // Envelope values and slopes back on the knot grid.
    Hbar_.resize(K);
    hbar_.resize(K);
    size_t e = 0;
    for (size_t i = 0; i < K; ++i) {
        while (e + 2 < hull_.size() && y_[hull_[e + 1]] <= y_[i]) ++e;
        const size_t a = hull_[e], b = hull_[e + 1];
        const double t = (y_[i] - y_[a]) / (y_[b] - y_[a]);
        Hbar_[i] = H_[a] + t * (H_[b] - H_[a]);
        hbar_[i] = hull_slope_[e];
        max_gap_ = std::max(max_gap_, H_[i] - Hbar_[i]);
    }
    hbar_.back() = hull_slope_.back();

    // Flat segments: envelope edges with a genuine interior gap.
    const double gap_tol = 1e-12 * std::max(1.0, std::abs(H_.back()));
    for (size_t ed = 0; ed + 1 < hull_.size(); ++ed) {
        const size_t a = hull_[ed], b = hull_[ed + 1];
        if (b <= a + 1) continue;
        double worst = 0.0;
        for (size_t i = a + 1; i < b; ++i) {
            const double t = (y_[i] - y_[a]) / (y_[b] - y_[a]);
            worst = std::max(worst, H_[i] - (H_[a] + t * (H_[b] - H_[a])));
        }
        if (worst > gap_tol) flats_.push_back({v_[a], v_[b], hull_slope_[ed]});
    }
}

size_t IronedVirtual::edge_of(double y) const {
    // Index of the envelope edge covering y.
    auto it = std::upper_bound(hull_.begin(), hull_.end(), y,
                               [this](double yy, size_t idx) {
                                   return yy < y_[idx];
                               });
    size_t e = (it == hull_.begin())
                   ? 0
                   : static_cast<size_t>(it - hull_.begin()) - 1;
    return std::min(e, hull_slope_.size() - 1);
}

double IronedVirtual::hbar(double y) const {
    y = std::clamp(y, y_.front(), y_.back());
    return hull_slope_[edge_of(y)];
}

double IronedVirtual::psibar(double v) const {
    v = std::clamp(v, U_, V_);
    // Flats take precedence so psibar is constant on [l, r] inclusive.
    for (const auto& f : flats_)
        if (f.l <= v && v <= f.r) return f.slope;
    // Map through the parent CDF implicitly: knots store v per y, so locate
    // by ability to stay exact on CDF flats.
    auto it = std::upper_bound(v_.begin(), v_.end(), v);
    size_t i = (it == v_.begin()) ? 0 : static_cast<size_t>(it - v_.begin()) - 1;
    i = std::min(i, v_.size() - 1);
    return hull_slope_[edge_of(y_[i])];
}

double IronedVirtual::left_of(double v) const {
    for (const auto& f : flats_)
        if (f.l < v && v <= f.r) return f.l;
    return v;
}

double IronedVirtual::right_of(double v) const {
    for (const auto& f : flats_)
        if (f.l <= v && v < f.r) return f.r;
    return v;
}

bool IronedVirtual::is_ironed_at(double v) const {
    for (const auto& f : flats_)
        if (f.l < v && v < f.r) return true;
    return false;
}

}  // namespace contestopt
