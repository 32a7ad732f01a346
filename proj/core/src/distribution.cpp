#include "contestopt/distribution.hpp"

#include <algorithm>
#include <cmath>

#include "contestopt/numerics.hpp"

namespace contestopt {

namespace {

void check_unit(double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0))
        throw std::domain_error(std::string(what) + "=" + std::to_string(v) +
                                " outside [0,1]");
}

}  // namespace

AbilityDistribution AbilityDistribution::uniform() {
    AbilityDistribution d;
    d.kind_ = DistKind::Uniform;
    return d;
}

AbilityDistribution AbilityDistribution::power(double k) {
    if (!(k > 0.0))
        throw std::invalid_argument("power: exponent must be > 0");
    AbilityDistribution d;
    d.kind_ = DistKind::Power;
    d.k_ = k;
    return d;
}

AbilityDistribution AbilityDistribution::piecewise_cdf(
    std::vector<std::pair<double, double>> points) {
    if (points.size() < 2)
        throw std::invalid_argument("piecewise_cdf: need >= 2 breakpoints");
    if (points.front() != std::pair<double, double>{0.0, 0.0} ||
        points.back() != std::pair<double, double>{1.0, 1.0})
        throw std::invalid_argument(
            "piecewise_cdf: breakpoints must span (0,0) to (1,1)");
    for (size_t i = 0; i + 1 < points.size(); ++i) {
        if (!(points[i + 1].first > points[i].first))
            throw std::invalid_argument("piecewise_cdf: v not ascending");
        if (points[i + 1].second < points[i].second)
            throw std::invalid_argument("piecewise_cdf: F decreasing");
    }
    AbilityDistribution d;
    d.kind_ = DistKind::PiecewiseLinearCdf;
    d.points_ = std::move(points);
    return d;
}

AbilityDistribution AbilityDistribution::mixture(
    std::vector<std::pair<double, AbilityDistribution>> components) {
    if (components.empty())
        throw std::invalid_argument("mixture: no components");
    double total = 0.0;
    AbilityDistribution d;
    d.kind_ = DistKind::Mixture;
    for (auto& [w, sub] : components) {
        if (!(w > 0.0))
            throw std::invalid_argument("mixture: weights must be > 0");
        total += w;
        d.components_.push_back(
            {w, std::make_shared<AbilityDistribution>(std::move(sub))});
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("mixture: weights must sum to 1");
    return d;
}

double AbilityDistribution::cdf(double v) const {
    if (v <= 0.0) return 0.0;
    if (v >= 1.0) return 1.0;
    switch (kind_) {
        case DistKind::Uniform:
            return v;
        case DistKind::Power:
            return std::pow(v, k_);
        case DistKind::PiecewiseLinearCdf: {
            auto it = std::upper_bound(
                points_.begin(), points_.end(), v,
                [](double x, const auto& p) { return x < p.first; });
            const auto& hi = *it;
            const auto& lo = *(it - 1);
            const double t = (v - lo.first) / (hi.first - lo.first);
            return lo.second + t * (hi.second - lo.second);
        }
        case DistKind::Mixture: {
            double s = 0.0;
            for (const auto& c : components_) s += c.weight * c.dist->cdf(v);
            return s;
        }
    }
    return 0.0;
}

double AbilityDistribution::pdf(double v) const {
    switch (kind_) {
        case DistKind::Uniform:
            return (v >= 0.0 && v <= 1.0) ? 1.0 : 0.0;
        case DistKind::Power:
            if (v < 0.0 || v > 1.0) return 0.0;
            return k_ * std::pow(v, k_ - 1.0);
        case DistKind::PiecewiseLinearCdf: {
            if (v < 0.0 || v > 1.0) return 0.0;
            // right-limit slope at breakpoints; left slope at v=1
            size_t i = 0;
            while (i + 2 < points_.size() && v >= points_[i + 1].first) ++i;
            const auto& lo = points_[i];
            const auto& hi = points_[i + 1];
            return (hi.second - lo.second) / (hi.first - lo.first);
        }
        case DistKind::Mixture: {
            double s = 0.0;
            for (const auto& c : components_) s += c.weight * c.dist->pdf(v);
            return s;
        }
    }
    return 0.0;
}

std::pair<double, double> AbilityDistribution::evaluate(double v) const {
    check_unit(v, "v");
    return {cdf(v), pdf(v)};
}

double AbilityDistribution::quantile(double p) const {
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 1.0;
    switch (kind_) {
        case DistKind::Uniform:
            return p;
        case DistKind::Power:
            return std::pow(p, 1.0 / k_);
        case DistKind::PiecewiseLinearCdf: {
            // min v with F(v) >= p: flats map to their left endpoint
            for (size_t i = 0; i + 1 < points_.size(); ++i) {
                const auto& lo = points_[i];
                const auto& hi = points_[i + 1];
                if (p <= hi.second) {
                    if (hi.second == lo.second) return lo.first;
                    const double t = (p - lo.second) / (hi.second - lo.second);
                    return lo.first + t * (hi.first - lo.first);
                }
            }
            return 1.0;
        }
        case DistKind::Mixture:
            return bisect_min_above([this](double v) { return cdf(v); }, 0.0,
                                    1.0, p);
    }
    return p;
}

double AbilityDistribution::virtual_ability(double v) const {
    check_unit(v, "v");
    const double f = pdf(v);
    if (f <= kDensityFloor) throw SingularDensityError(v, f);
    return v - (1.0 - cdf(v)) / f;
}

double AbilityDistribution::interval_virtual(double u, double v) const {
    check_unit(u, "u");
    check_unit(v, "v");
    if (v > u)
        throw std::invalid_argument("interval_virtual: requires v <= u");
    const double f = pdf(v);
    if (f <= kDensityFloor) throw SingularDensityError(v, f);
    return v - (cdf(u) - cdf(v)) / f;
}

AbilityDistribution::RegularityReport AbilityDistribution::is_regular(
    int grid_size, double tol) const {
    if (grid_size < 2)
        throw std::invalid_argument("is_regular: grid_size must be >= 2");
    RegularityReport rep;
    bool have_prev = false;
    double prev = 0.0;
    for (int i = 0; i < grid_size; ++i) {
        const double v = static_cast<double>(i) / (grid_size - 1);
        const double f = pdf(v);
        if (f <= kDensityFloor) {
            ++rep.skipped;
            continue;
        }
        const double psi = v - (1.0 - cdf(v)) / f;
        if (have_prev && psi < prev - tol) {
            rep.regular = false;
            rep.violation_point = v;
            return rep;
        }
        prev = psi;
        have_prev = true;
    }
    return rep;
}

double AbilityDistribution::cdf_power_integral(double lo, double hi,
                                               int m) const {
    if (m < 0) throw std::invalid_argument("cdf_power_integral: m < 0");
    lo = std::clamp(lo, 0.0, 1.0);
    hi = std::clamp(hi, 0.0, 1.0);
    if (hi <= lo) return 0.0;
    if (m == 0) return hi - lo;
    switch (kind_) {
        case DistKind::Uniform:
            return (std::pow(hi, m + 1) - std::pow(lo, m + 1)) / (m + 1);
        case DistKind::Power: {
            const double e = k_ * m + 1.0;
            return (std::pow(hi, e) - std::pow(lo, e)) / e;
        }
        case DistKind::PiecewiseLinearCdf: {
            double total = 0.0;
            for (size_t i = 0; i + 1 < points_.size(); ++i) {
                const double a = std::max(lo, points_[i].first);
                const double b = std::min(hi, points_[i + 1].first);
                if (b <= a) continue;
                const double s = (points_[i + 1].second - points_[i].second) /
                                 (points_[i + 1].first - points_[i].first);
                const double Fa = cdf(a);
                if (s <= 0.0) {
                    total += std::pow(Fa, m) * (b - a);
                } else {
                    const double Fb = cdf(b);
                    total += (std::pow(Fb, m + 1) - std::pow(Fa, m + 1)) /
                             (s * (m + 1));
                }
            }
            return total;
        }
        case DistKind::Mixture:
            return integrate(
                [this, m](double v) { return std::pow(cdf(v), m); }, lo, hi);
    }
    return 0.0;
}

std::vector<double> AbilityDistribution::density_breakpoints() const {
    std::vector<double> pts;
    switch (kind_) {
        case DistKind::Uniform:
        case DistKind::Power:
            break;
        case DistKind::PiecewiseLinearCdf:
            for (size_t i = 1; i + 1 < points_.size(); ++i)
                pts.push_back(points_[i].first);
            break;
        case DistKind::Mixture:
            for (const auto& c : components_) {
                auto sub = c.dist->density_breakpoints();
                pts.insert(pts.end(), sub.begin(), sub.end());
            }
            break;
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

std::string AbilityDistribution::describe() const {
    switch (kind_) {
        case DistKind::Uniform:
            return "uniform";
        case DistKind::Power:
            return "power(k=" + std::to_string(k_) + ")";
        case DistKind::PiecewiseLinearCdf:
            return "piecewise_cdf(" + std::to_string(points_.size()) +
                   " points)";
        case DistKind::Mixture:
            return "mixture(" + std::to_string(components_.size()) +
                   " components)";
    }
    return "?";
}

}  // namespace contestopt
