#include "contestopt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "contestopt/numerics.hpp"
#include "contestopt/order_stats.hpp"
#include "contestopt/parallel.hpp"
#include "contestopt/rng.hpp"

namespace contestopt {
namespace oracle {

namespace {

long lattice_size(int dims, int steps) {
    // C(steps + dims - 1, dims - 1), saturating
    double c = 1.0;
    for (int i = 1; i < dims; ++i) c = c * (steps + i) / i;
    return c > 2e18 ? 2000000000000000000L : static_cast<long>(c);
}

}  // namespace

OracleReport grid_optimal_alpha(const std::shared_ptr<const BetaFamily>& family,
                                const ThresholdObjective& objective,
                                double resolution) {
    const int dims = family->n() - 1;
    const int steps = static_cast<int>(std::lround(1.0 / resolution));
    if (steps < 1 || steps > 200)
        throw std::invalid_argument(
            "grid_optimal_alpha: resolution must divide 1 into <= 200 steps");
    if (lattice_size(dims, steps) > 10000000L)
        throw std::invalid_argument("grid_optimal_alpha: lattice exceeds 1e7 points");

    OracleReport rep;
    rep.resolution = resolution;
    rep.oracle_objective = -1e300;

    std::vector<int> counts(dims, 0);
    std::vector<double> alpha(dims, 0.0);
    const auto evaluate = [&]() {
        for (int d = 0; d < dims; ++d)
            alpha[d] = static_cast<double>(counts[d]) / steps;
        const double obj =
            eval_objective(RankContest(family, alpha), objective);
        if (obj > rep.oracle_objective) rep.oracle_objective = obj;
    };
    // Enumerate compositions of `steps` into `dims` parts.
    const std::function<void(int, int)> rec = [&](int d, int remaining) {
        if (d == dims - 1) {
            counts[d] = remaining;
            evaluate();
            return;
        }
        for (int c = remaining; c >= 0; --c) {
            counts[d] = c;
            rec(d + 1, remaining - c);
        }
    };
    rec(0, steps);
    return rep;
}

// ---------------------------------------------------------------------------
// Lattice-xi oracle
// ---------------------------------------------------------------------------

namespace {

struct XiLattice {
    int m;                      // cells
    int L;                      // max level index (levels 0..L)
    std::vector<double> vlo;    // quantile at cell left edges, size m+1
    std::vector<double> w;      // cell widths in ability space
    std::vector<double> cap;    // Matthews suffix cap in level units, per cell
    std::vector<int> lev;       // current levels
    std::vector<long> suffix;   // suffix level sums

    XiLattice(const AbilityDistribution& dist, int n, int m_, int L_)
        : m(m_), L(L_), vlo(m_ + 1), w(m_), cap(m_), lev(m_, 0), suffix(m_ + 1, 0) {
        for (int k = 0; k <= m; ++k)
            vlo[k] = dist.quantile(static_cast<double>(k) / m);
        vlo[0] = 0.0;
        vlo[m] = 1.0;
        for (int k = 0; k < m; ++k) w[k] = vlo[k + 1] - vlo[k];
        for (int k = 0; k < m; ++k) {
            const double y = static_cast<double>(k) / m;
            cap[k] = (1.0 - std::pow(y, n)) / n * (static_cast<double>(L) * m);
        }
    }

    void rebuild_suffix() {
        suffix[m] = 0;
        for (int k = m - 1; k >= 0; --k) suffix[k] = suffix[k + 1] + lev[k];
    }

    bool feasible_with(int k, int newlev) const {
        if (newlev < 0 || newlev > L) return false;
        if (k > 0 && newlev < lev[k - 1]) return false;
        if (k + 1 < m && newlev > lev[k + 1]) return false;
        const long d = newlev - lev[k];
        for (int j = 0; j <= k; ++j)
            if (suffix[j] + d > cap[j] + 1e-9) return false;
        return true;
    }

    void set_level(int k, int newlev) {
        const long d = newlev - lev[k];
        lev[k] = newlev;
        for (int j = 0; j <= k; ++j) suffix[j] += d;
    }
};

double lattice_objective(const XiLattice& x, const ThresholdObjective& obj) {
    const int m = x.m;
    double prefix_area = 0.0;
    double total = 0.0;
    for (int k = 0; k < m; ++k) {
        const double xi = static_cast<double>(x.lev[k]) / x.L;
        const double beta = x.vlo[k] * xi - prefix_area;
        prefix_area += xi * x.w[k];
        double g;
        switch (obj.kind) {
            case ThresholdObjective::Kind::Binary:
                g = beta >= obj.B ? 1.0 : 0.0;
                break;
            case ThresholdObjective::Kind::Linear:
                g = std::max(obj.B_L, std::min(obj.B_H, beta));
                break;
            case ThresholdObjective::Kind::TotalOutput:
                g = beta;
                break;
            case ThresholdObjective::Kind::Transformed:
                g = obj.h(std::clamp(beta, 0.0, 1.0));
                break;
            default:
                g = 0.0;
        }
        total += g / m;
    }
    return total;
}

}  // namespace

OracleReport grid_optimal_xi(const AbilityDistribution& dist, int n,
                             const ThresholdObjective& objective, int cells) {
    if (cells < 2 || cells > 512)
        throw std::invalid_argument("grid_optimal_xi: cells must be in [2,512]");
    if (n < 1) throw std::invalid_argument("grid_optimal_xi: n must be >= 1");
    const int L = 63;

    OracleReport rep;
    rep.resolution = 1.0 / cells;

    XiLattice x(dist, n, cells, L);
    double best_obj = -1e300;
    std::vector<int> best_lev;

    for (int reserve = x.m; reserve >= 0; --reserve) {
        // Matthews-tight greedy fill from the top, zero below the reserve.
        std::fill(x.lev.begin(), x.lev.end(), 0);
        x.rebuild_suffix();
        int cap_next = L;
        long suf = 0;
        for (int k = x.m - 1; k >= reserve; --k) {
            const int room =
                static_cast<int>(std::floor(x.cap[k] - suf + 1e-9));
            const int lv = std::max(0, std::min(cap_next, room));
            x.lev[k] = lv;
            suf += lv;
            cap_next = lv;
        }
        x.rebuild_suffix();
        bool feasible = true;
        for (int k = 0; k < x.m; ++k)
            if (x.suffix[k] > x.cap[k] + 1e-9) feasible = false;
        if (!feasible) continue;

        double cur = lattice_objective(x, objective);
        bool improved = true;
        while (improved) {
            improved = false;
            for (int k = 0; k < x.m; ++k) {
                for (int d : {-1, 1, -2, 2, -4, 4, -8, 8}) {
                    const int nl = x.lev[k] + d;
                    if (!x.feasible_with(k, nl)) continue;
                    const int old = x.lev[k];
                    x.set_level(k, nl);
                    const double o = lattice_objective(x, objective);
                    if (o > cur + 1e-13) {
                        cur = o;
                        improved = true;
                    } else {
                        x.set_level(k, old);
                    }
                }
            }
        }
        if (cur > best_obj) {
            best_obj = cur;
            best_lev = x.lev;
        }
    }

    rep.oracle_objective = best_obj;
    for (int k = 0; k < x.m; ++k) {
        if (best_lev[k] > 0) {
            rep.reserve = x.vlo[k];
            break;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Best-response regret
// ---------------------------------------------------------------------------

namespace {

// Expected prize of producing output b against n-1 opponents playing
// beta + offset, for prize vector w; p_lo/p_tie from the output CDF.
struct DeviationValue {
    double p_lo, p_tie, expected_prize;
};

DeviationValue deviation_value(const RankContest& contest, double b,
                               double offset) {
    const auto& fam = contest.family();
    const auto& dist = fam.dist();
    const int n = contest.n();
    const auto w = contest.prizes();

    // Opponent output <= x iff beta(v) <= x - offset.
    const auto cdf_out_strict = [&](double x) {
        // P(output < x) = F(min v with beta(v) >= x - offset)
        if (x - offset <= 0.0) return 0.0;
        const auto v = contest.inverse_output(x - offset);
        return dist.cdf(v.value_or(1.0));
    };
    const auto cdf_out_le = [&](double x) {
        // P(output <= x) = F(max v with beta(v) <= x - offset)
        if (x - offset < 0.0) return 0.0;
        const double t = x - offset;
        if (contest.output(1.0) <= t) return 1.0;
        // min v with beta(v) > t
        const double v = bisect_min_above(
            [&](double vv) {
                return contest.output(vv) > t ? 1.0 : 0.0;
            },
            0.0, 1.0, 0.5);
        return dist.cdf(v);
    };

    DeviationValue dv;
    dv.p_lo = cdf_out_strict(b);
    const double p_le = std::max(cdf_out_le(b), dv.p_lo);
    dv.p_tie = p_le - dv.p_lo;
    const double p_hi = std::max(0.0, 1.0 - p_le);

    double prize = 0.0;
    for (int h = 0; h <= n - 1; ++h) {
        for (int t = 0; t + h <= n - 1; ++t) {
            const int lo = n - 1 - h - t;
            double p = binomial_coefficient(n - 1, h) *
                       binomial_coefficient(n - 1 - h, t) *
                       std::pow(p_hi, h) * std::pow(dv.p_tie, t) *
                       std::pow(dv.p_lo, lo);
            if (p <= 0.0) continue;
            double block = 0.0;  // average prize over the tied block
            for (int r = h + 1; r <= h + t + 1; ++r) block += w[r - 1];
            block /= (t + 1);
            prize += p * block;
        }
    }
    dv.expected_prize = prize;
    return dv;
}

}  // namespace

OracleReport best_response_regret(const RankContest& contest, long samples,
                                  int deviation_grid, uint64_t seed,
                                  double strategy_offset) {
    if (samples < 1000)
        throw std::invalid_argument("best_response_regret: samples must be >= 1e3");
    if (deviation_grid < 2)
        throw std::invalid_argument("best_response_regret: grid too small");

    const auto& dist = contest.family().dist();
    const double bmax = contest.output(1.0) + strategy_offset;

    // Precompute expected prize on the deviation grid (independent of v).
    std::vector<double> dev_b(deviation_grid), dev_prize(deviation_grid);
    for (int i = 0; i < deviation_grid; ++i) {
        dev_b[i] = bmax * i / (deviation_grid - 1);
        dev_prize[i] =
            deviation_value(contest, dev_b[i], strategy_offset).expected_prize;
    }

    OracleReport rep;
    rep.samples = samples;
    rep.seed = seed;
    rep.resolution = deviation_grid;

    const long chunk = 4096;
    const long chunks = (samples + chunk - 1) / chunk;
    std::vector<double> chunk_worst(chunks, 0.0);
    parallel_slots(chunks, [&](long ci) {
        Xoshiro256 rng(seed, static_cast<uint64_t>(ci));
        const long lo = ci * chunk;
        const long hi = std::min(samples, lo + chunk);
        double worst = 0.0;
        for (long s = lo; s < hi; ++s) {
            const double v = dist.quantile(rng.next_double());
            const double b_eq = contest.output(v) + strategy_offset;
            const double prize_eq =
                deviation_value(contest, b_eq, strategy_offset).expected_prize;
            const double u_eq = v * prize_eq - b_eq;
            double u_best = u_eq;
            for (int i = 0; i < deviation_grid; ++i)
                u_best = std::max(u_best, v * dev_prize[i] - dev_b[i]);
            worst = std::max(worst, u_best - u_eq);
        }
        chunk_worst[ci] = worst;
    });
    rep.regret = *std::max_element(chunk_worst.begin(), chunk_worst.end());
    return rep;
}

// ---------------------------------------------------------------------------
// Monte-Carlo objective
// ---------------------------------------------------------------------------

namespace {

template <class BetaFn>
OracleReport mc_objective_impl(const AbilityDistribution& dist,
                               const BetaFn& beta,
                               const ThresholdObjective& objective,
                               long samples, uint64_t seed) {
    if (samples < 1000)
        throw std::invalid_argument("mc_objective: samples must be >= 1e3");
    const auto g = [&](double v) -> double {
        const double b = beta(v);
        switch (objective.kind) {
            case ThresholdObjective::Kind::Binary:
                return b >= objective.B ? 1.0 : 0.0;
            case ThresholdObjective::Kind::Linear:
                return std::max(objective.B_L, std::min(objective.B_H, b));
            case ThresholdObjective::Kind::TotalOutput:
                return b;
            case ThresholdObjective::Kind::Transformed:
                return objective.h(b);
        }
        return 0.0;
    };
    const long chunk = 4096;
    const long chunks = (samples + chunk - 1) / chunk;
    std::vector<std::pair<double, double>> partial(chunks);
    parallel_slots(chunks, [&](long ci) {
        Xoshiro256 rng(seed, static_cast<uint64_t>(ci));
        KahanSum local, localsq;
        const long lo = ci * chunk;
        const long hi = std::min(samples, lo + chunk);
        for (long s = lo; s < hi; ++s) {
            const double v = dist.quantile(rng.next_double());
            const double x = g(v);
            local.add(x);
            localsq.add(x * x);
        }
        partial[ci] = {local.value(), localsq.value()};
    });
    KahanSum sum, sumsq;
    for (const auto& [a, b] : partial) {
        sum.add(a);
        sumsq.add(b);
    }
    OracleReport rep;
    rep.samples = samples;
    rep.seed = seed;
    const double mean = sum.value() / samples;
    const double var =
        std::max(0.0, sumsq.value() / samples - mean * mean);
    rep.oracle_objective = mean;
    rep.std_error = std::sqrt(var / samples);
    return rep;
}

}  // namespace

OracleReport mc_objective(const RankContest& contest,
                          const ThresholdObjective& objective, long samples,
                          uint64_t seed) {
    return mc_objective_impl(
        contest.family().dist(), [&](double v) { return contest.output(v); },
        objective, samples, seed);
}

OracleReport mc_objective(const GeneralContest& contest,
                          const ThresholdObjective& objective, long samples,
                          uint64_t seed) {
    return mc_objective_impl(
        contest.xi.dist(), [&](double v) { return contest.output(v); },
        objective, samples, seed);
}

}  // namespace oracle
}  // namespace contestopt
