#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace contestopt {

// Shared integration settings. One integrator everywhere keeps the
// cross-module error budgets coherent.
inline constexpr double kQuadTol = 1e-10;
inline constexpr int kQuadMaxDepth = 40;

namespace detail {

template <class F>
double simpson_rec(const F& f, double a, double m, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double err = (left + right - whole) / 15.0;
    if (depth <= 0 || std::abs(err) <= tol) return left + right + err;
    return simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson on [a,b], absolute tolerance.
template <class F>
double integrate(const F& f, double a, double b, double tol = kQuadTol,
                 int max_depth = kQuadMaxDepth) {
    if (!(b > a)) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_rec(f, a, m, b, fa, fm, fb, whole, tol, max_depth);
}

// Bisection for the minimum x in [lo,hi] with g(x) >= target, assuming g
// non-decreasing. Returns hi if g(hi) < target was not pre-checked by caller.
template <class G>
double bisect_min_above(const G& g, double lo, double hi, double target,
                        int iters = 100) {
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) >= target)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

// Root of g on [lo,hi] given g(lo), g(hi) of opposite sign (or zero).
template <class G>
double bisect_root(const G& g, double lo, double hi, int iters = 100) {
    double flo = g(lo);
    if (flo == 0.0) return lo;
    const bool rising = flo < 0.0;
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = g(mid);
        if ((fm < 0.0) == rising)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Golden-section maximization of a unimodal-ish f on [a,b].
template <class F>
double golden_max(const F& f, double a, double b, double tol = 1e-10) {
    static const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

// Compensated (Kahan) accumulator for order-stable reductions.
struct KahanSum {
    double sum = 0.0;
    double c = 0.0;
    void add(double x) {
        const double y = x - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

// Monotone cubic (Fritsch-Carlson) interpolant on ascending knots.
// Preserves monotonicity of the data.
class MonotoneCubic {
public:
    MonotoneCubic() = default;
    MonotoneCubic(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y)) {
        const size_t n = x_.size();
        if (n < 2 || y_.size() != n)
            throw std::invalid_argument("MonotoneCubic: need >= 2 knots");
        std::vector<double> h(n - 1), delta(n - 1);
        for (size_t i = 0; i + 1 < n; ++i) {
            h[i] = x_[i + 1] - x_[i];
            if (h[i] <= 0.0)
                throw std::invalid_argument("MonotoneCubic: knots not ascending");
            delta[i] = (y_[i + 1] - y_[i]) / h[i];
        }
        m_.assign(n, 0.0);
        // Three-point one-sided endpoint slopes (standard pchip rule).
        auto end_slope = [](double h0, double h1, double d0, double d1) {
            double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
            if (m * d0 <= 0.0)
                m = 0.0;
            else if (d0 * d1 < 0.0 && std::abs(m) > 3.0 * std::abs(d0))
                m = 3.0 * d0;
            return m;
        };
        m_[0] = (n == 2) ? delta[0] : end_slope(h[0], h[1], delta[0], delta[1]);
        m_[n - 1] = (n == 2) ? delta[n - 2]
                             : end_slope(h[n - 2], h[n - 3], delta[n - 2],
                                         delta[n - 3]);
        for (size_t i = 1; i + 1 < n; ++i) {
            if (delta[i - 1] * delta[i] <= 0.0) {
                m_[i] = 0.0;
            } else {
                // weighted harmonic mean (pchip): robust on uneven spacing
                const double w1 = 2.0 * h[i] + h[i - 1];
                const double w2 = h[i] + 2.0 * h[i - 1];
                m_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
            }
        }
        for (size_t i = 0; i + 1 < n; ++i) {
            if (delta[i] == 0.0) {
                m_[i] = m_[i + 1] = 0.0;
                continue;
            }
            const double a = m_[i] / delta[i];
            const double b = m_[i + 1] / delta[i];
            const double s = a * a + b * b;
            if (s > 9.0) {
                const double t = 3.0 / std::sqrt(s);
                m_[i] = t * a * delta[i];
                m_[i + 1] = t * b * delta[i];
            }
        }
    }

    double operator()(double x) const {
        if (x <= x_.front()) return y_.front();
        if (x >= x_.back()) return y_.back();
        const auto it = std::upper_bound(x_.begin(), x_.end(), x);
        const size_t i = static_cast<size_t>(it - x_.begin()) - 1;
        const double h = x_[i + 1] - x_[i];
        const double t = (x - x_[i]) / h;
        const double t2 = t * t, t3 = t2 * t;
        const double h00 = 2 * t3 - 3 * t2 + 1;
        const double h10 = t3 - 2 * t2 + t;
        const double h01 = -2 * t3 + 3 * t2;
        const double h11 = t3 - t2;
        return h00 * y_[i] + h10 * h * m_[i] + h01 * y_[i + 1] +
               h11 * h * m_[i + 1];
    }

    bool empty() const { return x_.empty(); }

private:
    std::vector<double> x_, y_, m_;
};

// Monotone cubic with declared corner knots: the data is interpolated as
// independent smooth pieces between corners, so derivative jumps at the
// corners do not pollute the neighbouring intervals.
class PiecewiseMonotoneCubic {
public:
    PiecewiseMonotoneCubic() = default;
    PiecewiseMonotoneCubic(const std::vector<double>& x,
                           const std::vector<double>& y,
                           const std::vector<double>& corners) {
        size_t start = 0;
        for (double c : corners) {
            const auto it = std::lower_bound(x.begin(), x.end(), c);
            if (it == x.end()) continue;
            const size_t idx = static_cast<size_t>(it - x.begin());
            if (idx <= start || idx + 1 >= x.size()) continue;
            if (std::abs(x[idx] - c) > 1e-12) continue;  // corner must be a knot
            add_piece(x, y, start, idx);
            start = idx;
        }
        add_piece(x, y, start, x.size() - 1);
    }

    double operator()(double x) const {
        size_t i = 0;
        while (i + 1 < bounds_.size() - 1 && x >= bounds_[i + 1]) ++i;
        return pieces_[i](x);
    }

private:
    std::vector<MonotoneCubic> pieces_;
    std::vector<double> bounds_;  // piece boundaries, size pieces+1

    void add_piece(const std::vector<double>& x, const std::vector<double>& y,
                   size_t a, size_t b) {
        if (b <= a) return;
        pieces_.emplace_back(
            std::vector<double>(x.begin() + a, x.begin() + b + 1),
            std::vector<double>(y.begin() + a, y.begin() + b + 1));
        if (bounds_.empty()) bounds_.push_back(x[a]);
        bounds_.push_back(x[b]);
    }
};

}  // namespace contestopt
