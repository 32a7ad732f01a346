#include "contestopt/rank_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "contestopt/numerics.hpp"
#include "contestopt/order_stats.hpp"
#include "contestopt/rng.hpp"

namespace contestopt {

namespace {

constexpr double kTieTol = 1e-9;
constexpr int kScanCells = 1000;  // 1e-3 bracketing grid

std::vector<int> support_of(const std::vector<double>& alpha) {
    std::vector<int> s;
    for (size_t j = 0; j < alpha.size(); ++j)
        if (alpha[j] > 1e-12) s.push_back(static_cast<int>(j) + 1);
    return s;
}

SolveReport make_report(const std::shared_ptr<const BetaFamily>& family,
                        std::vector<double> alpha, double objective) {
    RankContest c(family, alpha);
    SolveReport r;
    r.objective = objective;
    r.alpha = std::move(alpha);
    r.prizes = c.prizes();
    r.support = support_of(r.alpha);
    return r;
}

std::vector<double> unit_alpha(int n, int j) {
    std::vector<double> a(n - 1, 0.0);
    a[j - 1] = 1.0;
    return a;
}

struct Candidate {
    double objective;
    std::vector<double> alpha;
};

// Deterministic winner: best objective, ties to the lexicographically
// smallest support.
const Candidate* pick_best(const std::vector<Candidate>& cands, bool* tie) {
    const Candidate* best = nullptr;
    *tie = false;
    for (const auto& c : cands) {
        if (!best) {
            best = &c;
            continue;
        }
        if (c.objective > best->objective + kTieTol) {
            best = &c;
            *tie = false;
        } else if (c.objective > best->objective - kTieTol) {
            *tie = true;
            if (support_of(c.alpha) < support_of(best->alpha)) best = &c;
        }
    }
    return best;
}

// Cumulative D_ij(V) = int_0^V (beta_i - beta_j) f dv on the scan grid.
std::vector<double> cumulative_diff(const BetaFamily& fam, int i, int j) {
    const auto& dist = fam.dist();
    std::vector<double> D(kScanCells + 1, 0.0);
    const auto g = [&](double v) {
        return (fam.beta_j(i, v) - fam.beta_j(j, v)) * dist.pdf(v);
    };
    for (int k = 1; k <= kScanCells; ++k) {
        const double a = static_cast<double>(k - 1) / kScanCells;
        const double b = static_cast<double>(k) / kScanCells;
        D[k] = D[k - 1] + (b - a) / 6.0 * (g(a) + 4.0 * g(0.5 * (a + b)) + g(b));
    }
    return D;
}

}  // namespace

SolveReport optimize_binary(const std::shared_ptr<const BetaFamily>& family,
                            double B) {
    if (!(B > 0.0)) throw std::invalid_argument("optimize_binary: B must be > 0");
    const int n = family->n();
    int best_j = 0;
    double best_v = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= n - 1; ++j) {
        const auto v = family->inverse_j(j, B);
        if (v && *v < best_v) {
            best_v = *v;
            best_j = j;
        }
    }
    if (best_j == 0) {
        SolveReport r = make_report(family, unit_alpha(n, 1), 0.0);
        r.infeasible = true;
        r.j_star = 1;
        return r;
    }
    SolveReport r = make_report(family, unit_alpha(n, best_j),
                                1.0 - family->dist().cdf(best_v));
    r.j_star = best_j;
    r.V_H = best_v;
    return r;
}

SolveReport optimize_total(const std::shared_ptr<const BetaFamily>& family) {
    const int n = family->n();
    int best_j = 1;
    if (family->regime() == Regime::UnitRange) {
        // argmax_j j * E[(j+1)-th highest of n]
        double best_score = -1.0;
        for (int j = 1; j <= n - 1; ++j) {
            const double score =
                j * integrate(
                        [&](double x) {
                            return x * order_pdf(family->dist(), n, j + 1, x);
                        },
                        0.0, 1.0);
            if (score > best_score + 1e-12) {
                best_score = score;
                best_j = j;
            }
        }
    }
    RankContest c(family, unit_alpha(n, best_j));
    SolveReport r = make_report(family, c.alpha(),
                                eval_objective(c, ThresholdObjective::total_output()));
    r.j_star = best_j;
    return r;
}

SolveReport optimize_linear_upper(
    const std::shared_ptr<const BetaFamily>& family, double B_H) {
    if (!(B_H > 0.0 && B_H <= 1.0))
        throw std::invalid_argument("optimize_linear_upper: need 0 < B_H <= 1");
    const int n = family->n();
    const auto objective = ThresholdObjective::linear(0.0, B_H);

    std::vector<Candidate> cands;
    for (int j = 1; j <= n - 1; ++j) {
        auto a = unit_alpha(n, j);
        cands.push_back({eval_objective(RankContest(family, a), objective), a});
    }

    for (int i = 1; i <= n - 1; ++i) {
        for (int j = i + 1; j <= n - 1; ++j) {
            const auto D = cumulative_diff(*family, i, j);
            // D dips negative then rises (single-crossing); bracket the
            // upcrossing, taking the midpoint of a root plateau if any.
            bool seen_negative = false;
            int k_neg = -1;
            for (int k = 1; k <= kScanCells; ++k) {
                if (D[k] < -1e-15) {
                    seen_negative = true;
                    k_neg = k;
                }
                if (seen_negative && D[k] >= 0.0) break;
            }
            if (!seen_negative) continue;  // identical or dominated pair
            int k_up = -1;
            for (int k = k_neg; k <= kScanCells; ++k) {
                if (D[k] >= 0.0) {
                    k_up = k;
                    break;
                }
            }
            if (k_up < 0) continue;  // stays negative: no interior root
            const auto& dist = family->dist();
            const auto Dexact = [&](double V) {
                const double base = D[k_up - 1];
                return base + integrate(
                                  [&](double v) {
                                      return (family->beta_j(i, v) -
                                              family->beta_j(j, v)) *
                                             dist.pdf(v);
                                  },
                                  static_cast<double>(k_up - 1) / kScanCells,
                                  V);
            };
            double V1 = bisect_root(Dexact,
                                    static_cast<double>(k_up - 1) / kScanCells,
                                    static_cast<double>(k_up) / kScanCells);
            // Root plateau: extend over contiguous |D| <= tol cells.
            double V2 = V1;
            for (int k = k_up; k <= kScanCells && std::abs(D[k]) <= 1e-14; ++k)
                V2 = static_cast<double>(k) / kScanCells;
            const double Vij = 0.5 * (V1 + V2);

            const double bi = family->beta_j(i, Vij);
            const double bj = family->beta_j(j, Vij);
            if (!(bi >= B_H && B_H >= bj)) continue;
            if (bi - bj < 1e-12) continue;
            const double ai = (B_H - bj) / (bi - bj);
            std::vector<double> alpha(n - 1, 0.0);
            alpha[i - 1] = ai;
            alpha[j - 1] = 1.0 - ai;
            cands.push_back(
                {eval_objective(RankContest(family, alpha), objective), alpha});
        }
    }

    bool tie = false;
    const Candidate* best = pick_best(cands, &tie);
    SolveReport r = make_report(family, best->alpha, best->objective);
    r.tie = tie;
    r.V_H = RankContest(family, best->alpha).inverse_output(B_H).value_or(1.0);
    return r;
}

namespace {

// Root set of E(V_L) = D(V_H) - D(V_L) = 0 for V_L in [0, V_H), bracketed on
// the scan grid and refined by bisection. E is unimodal in V_L, so there are
// at most two interior roots.
std::vector<double> inner_roots(const BetaFamily& fam, int i, int j,
                                const std::vector<double>& D, double V_H) {
    const auto& dist = fam.dist();
    const auto Dat = [&](double V) {
        const int k = std::min(static_cast<int>(V * kScanCells),
                               kScanCells - 1);
        return D[k] + integrate(
                          [&](double v) {
                              return (fam.beta_j(i, v) - fam.beta_j(j, v)) *
                                     dist.pdf(v);
                          },
                          static_cast<double>(k) / kScanCells, V);
    };
    const double DH = Dat(V_H);
    const auto E = [&](double VL) { return DH - Dat(VL); };
    std::vector<double> roots;
    const int kmax = static_cast<int>(V_H * kScanCells);
    double prev = E(0.0);
    for (int k = 1; k <= kmax; ++k) {
        const double v = std::min(V_H, static_cast<double>(k) / kScanCells);
        const double cur = E(v);
        if ((prev < 0.0 && cur >= 0.0) || (prev > 0.0 && cur <= 0.0)) {
            const double lo = static_cast<double>(k - 1) / kScanCells;
            roots.push_back(bisect_root(E, lo, v, 60));
        }
        prev = cur;
        if (v >= V_H) break;
    }
    return roots;
}

}  // namespace

SolveReport optimize_linear_full(
    const std::shared_ptr<const BetaFamily>& family, double B_L, double B_H) {
    if (!(0.0 <= B_L && B_L < B_H && B_H <= 1.0))
        throw std::invalid_argument("optimize_linear_full: need 0 <= B_L < B_H <= 1");
    if (B_L == 0.0) return optimize_linear_upper(family, B_H);

    const int n = family->n();
    const auto objective = ThresholdObjective::linear(B_L, B_H);
    const auto& dist = family->dist();

    std::vector<Candidate> cands;
    for (int j = 1; j <= n - 1; ++j) {
        auto a = unit_alpha(n, j);
        cands.push_back({eval_objective(RankContest(family, a), objective), a});
    }

    const auto add_clipped = [&](std::vector<double> alpha) {
        double neg = 0.0, sum = 0.0;
        for (double& a : alpha) {
            if (a < 0.0) {
                neg = std::min(neg, a);
                a = 0.0;
            }
            sum += a;
        }
        if (neg < -1e-9 || sum <= 0.0) return;  // left the simplex
        for (double& a : alpha) a /= sum;
        cands.push_back(
            {eval_objective(RankContest(family, alpha), objective), alpha});
    };

    // Pair supports {i, j}.
    for (int i = 1; i <= n - 1; ++i) {
        for (int j = i + 1; j <= n - 1; ++j) {
            const auto D = cumulative_diff(*family, i, j);
            const auto pair_alpha = [&](double VL) -> std::vector<double> {
                const double bi = family->beta_j(i, VL);
                const double bj = family->beta_j(j, VL);
                std::vector<double> alpha(n - 1, 0.0);
                if (std::abs(bi - bj) < 1e-13) return {};
                const double ai = (B_L - bj) / (bi - bj);
                alpha[i - 1] = ai;
                alpha[j - 1] = 1.0 - ai;
                return alpha;
            };
            // Saturated: outer bisection on V_H for beta(V_H) = B_H.
            const auto residual = [&](double VH, double root_sel) -> double {
                auto roots = inner_roots(*family, i, j, D, VH);
                if (roots.empty()) return std::numeric_limits<double>::quiet_NaN();
                const double VL = root_sel < 0.5 ? roots.front() : roots.back();
                auto alpha = pair_alpha(VL);
                if (alpha.empty()) return std::numeric_limits<double>::quiet_NaN();
                double b = 0.0;
                for (int a = 1; a <= n - 1; ++a)
                    b += alpha[a - 1] * family->beta_j(a, VH);
                return b - B_H;
            };
            for (double sel : {0.0, 1.0}) {
                double prev = std::numeric_limits<double>::quiet_NaN();
                for (int k = 1; k <= 100; ++k) {
                    const double VH = static_cast<double>(k) / 100.0;
                    const double cur = residual(VH, sel);
                    if (!std::isnan(prev) && !std::isnan(cur) &&
                        ((prev < 0 && cur >= 0) || (prev > 0 && cur <= 0))) {
                        double lo = (k - 1) / 100.0, hi = VH;
                        for (int it = 0; it < 40; ++it) {
                            const double mid = 0.5 * (lo + hi);
                            const double rm = residual(mid, sel);
                            if (std::isnan(rm)) break;
                            if ((rm < 0) == (prev < 0))
                                lo = mid;
                            else
                                hi = mid;
                        }
                        const double VHs = 0.5 * (lo + hi);
                        auto roots = inner_roots(*family, i, j, D, VHs);
                        if (!roots.empty()) {
                            const double VL =
                                sel < 0.5 ? roots.front() : roots.back();
                            auto alpha = pair_alpha(VL);
                            if (!alpha.empty()) add_clipped(alpha);
                        }
                    }
                    prev = cur;
                }
            }
            // Unsaturated: V_H = 1.
            for (double VL : inner_roots(*family, i, j, D, 1.0)) {
                auto alpha = pair_alpha(VL);
                if (alpha.empty()) continue;
                double b1 = 0.0;
                bool ok = true;
                for (double a : alpha)
                    if (a < -1e-9) ok = false;
                for (int a = 1; a <= n - 1 && ok; ++a)
                    b1 += std::max(0.0, alpha[a - 1]) * family->beta_j(a, 1.0);
                if (ok && b1 <= B_H + 1e-9) add_clipped(alpha);
            }
        }
    }

    // Triple supports {i, j, k}: roots of E_ij = 0 traced over V_H, with the
    // sign change of E_jk along the trace located by bisection.
    for (int i = 1; i <= n - 1; ++i) {
        for (int j = i + 1; j <= n - 1; ++j) {
            for (int k = j + 1; k <= n - 1; ++k) {
                const auto Dij = cumulative_diff(*family, i, j);
                const auto Djk = cumulative_diff(*family, j, k);
                const auto Ejk = [&](double VL, double VH) {
                    const auto Dat = [&](const std::vector<double>& D,
                                         double V) {
                        const int c = std::min(
                            static_cast<int>(V * kScanCells), kScanCells - 1);
                        return D[c] +
                               integrate(
                                   [&](double v) {
                                       return (family->beta_j(j, v) -
                                               family->beta_j(k, v)) *
                                              dist.pdf(v);
                                   },
                                   static_cast<double>(c) / kScanCells, V);
                    };
                    return Dat(Djk, VH) - Dat(Djk, VL);
                };
                const auto triple_alpha =
                    [&](double VL, double VH) -> std::vector<double> {
                    // [beta_i(VL) beta_j(VL) beta_k(VL)] [ai]   [B_L]
                    // [beta_i(VH) beta_j(VH) beta_k(VH)] [aj] = [B_H]
                    // [    1          1          1     ] [ak]   [ 1 ]
                    const double a11 = family->beta_j(i, VL),
                                 a12 = family->beta_j(j, VL),
                                 a13 = family->beta_j(k, VL);
                    const double a21 = family->beta_j(i, VH),
                                 a22 = family->beta_j(j, VH),
                                 a23 = family->beta_j(k, VH);
                    const double det = a11 * (a22 - a23) - a12 * (a21 - a23) +
                                       a13 * (a21 - a22);
                    if (std::abs(det) < 1e-14) return {};
                    const double b1 = B_L, b2 = B_H, b3 = 1.0;
                    const double ai =
                        (b1 * (a22 - a23) - a12 * (b2 - a23 * b3) +
                         a13 * (b2 - a22 * b3)) /
                        det;
                    const double aj =
                        (a11 * (b2 - a23 * b3) - b1 * (a21 - a23) +
                         a13 * (a21 * b3 - b2)) /
                        det;
                    const double ak = 1.0 - ai - aj;
                    std::vector<double> alpha(n - 1, 0.0);
                    alpha[i - 1] = ai;
                    alpha[j - 1] = aj;
                    alpha[k - 1] = ak;
                    return alpha;
                };
                for (int branch = 0; branch < 2; ++branch) {
                    double prevG = std::numeric_limits<double>::quiet_NaN();
                    double prevVH = 0.0;
                    for (int c = 1; c <= 100; ++c) {
                        const double VH = static_cast<double>(c) / 100.0;
                        auto roots = inner_roots(*family, i, j, Dij, VH);
                        double G = std::numeric_limits<double>::quiet_NaN();
                        if (!roots.empty()) {
                            const double VL =
                                branch == 0 ? roots.front() : roots.back();
                            G = Ejk(VL, VH);
                        }
                        if (!std::isnan(prevG) && !std::isnan(G) &&
                            ((prevG < 0 && G >= 0) || (prevG > 0 && G <= 0))) {
                            double lo = prevVH, hi = VH;
                            for (int it = 0; it < 40; ++it) {
                                const double mid = 0.5 * (lo + hi);
                                auto rm = inner_roots(*family, i, j, Dij, mid);
                                if (rm.empty()) break;
                                const double VLm =
                                    branch == 0 ? rm.front() : rm.back();
                                const double gm = Ejk(VLm, mid);
                                if ((gm < 0) == (prevG < 0))
                                    lo = mid;
                                else
                                    hi = mid;
                            }
                            const double VHs = 0.5 * (lo + hi);
                            auto rs = inner_roots(*family, i, j, Dij, VHs);
                            if (!rs.empty()) {
                                const double VLs =
                                    branch == 0 ? rs.front() : rs.back();
                                auto alpha = triple_alpha(VLs, VHs);
                                if (!alpha.empty()) add_clipped(alpha);
                            }
                        }
                        prevG = G;
                        prevVH = VH;
                    }
                }
            }
        }
    }

    bool tie = false;
    const Candidate* best = pick_best(cands, &tie);
    SolveReport r = make_report(family, best->alpha, best->objective);
    r.tie = tie;
    RankContest winner(family, best->alpha);
    r.V_L = winner.inverse_output(B_L).value_or(1.0);
    r.V_H = winner.inverse_output(B_H).value_or(1.0);
    return r;
}

double simple_vs_optimal(const std::shared_ptr<const BetaFamily>& family,
                         double B_L, double B_H) {
    const auto objective = ThresholdObjective::linear(B_L, B_H);
    const SolveReport opt = optimize_linear_full(family, B_L, B_H);
    double best_simple = 0.0;
    for (int j = 1; j <= family->n() - 1; ++j)
        best_simple = std::max(
            best_simple, eval_objective(RankContest(family, unit_alpha(family->n(), j)),
                                        objective));
    return opt.objective / best_simple;
}

double crossing_point(const BetaFamily& family, int i, int j) {
    if (!(1 <= i && i < j && j <= family.n() - 1))
        throw std::invalid_argument("crossing_point: need 1 <= i < j <= n-1");
    const auto delta = [&](double v) {
        return family.beta_j(i, v) - family.beta_j(j, v);
    };
    for (int k = 1; k <= kScanCells; ++k) {
        const double a = static_cast<double>(k - 1) / kScanCells;
        const double b = static_cast<double>(k) / kScanCells;
        if (delta(a) <= 0.0 && delta(b) > 0.0) return bisect_root(delta, a, b);
    }
    return 1.0;
}

namespace {

// Euclidean projection onto the probability simplex (Duchi et al.).
std::vector<double> project_simplex(std::vector<double> v) {
    std::vector<double> u = v;
    std::sort(u.begin(), u.end(), std::greater<>());
    double css = 0.0, theta = 0.0;
    int rho = 0;
    for (size_t i = 0; i < u.size(); ++i) {
        css += u[i];
        const double t = (css - 1.0) / static_cast<double>(i + 1);
        if (u[i] - t > 0.0) {
            rho = static_cast<int>(i) + 1;
            theta = t;
        }
    }
    (void)rho;
    for (double& x : v) x = std::max(0.0, x - theta);
    return v;
}

}  // namespace

SolveReport optimize_transformed(
    const std::shared_ptr<const BetaFamily>& family,
    const std::function<double(double)>& h, TransformShape shape) {
    const int n = family->n();
    const auto objective = ThresholdObjective::transformed(h, shape);
    const auto score = [&](const std::vector<double>& alpha) {
        return eval_objective(RankContest(family, alpha), objective);
    };

    std::vector<Candidate> cands;
    for (int j = 1; j <= n - 1; ++j) {
        auto a = unit_alpha(n, j);
        cands.push_back({score(a), a});
    }

    if (shape == TransformShape::Concave && n > 2) {
        std::vector<std::vector<double>> starts;
        for (int j = 1; j <= n - 1; ++j) starts.push_back(unit_alpha(n, j));
        starts.emplace_back(n - 1, 1.0 / (n - 1));
        const double fd = 1e-6;
        for (auto alpha : starts) {
            double cur = score(alpha);
            for (int iter = 0; iter < 500; ++iter) {
                std::vector<double> grad(n - 1);
                for (int d = 0; d < n - 1; ++d) {
                    auto ap = alpha;
                    ap[d] += fd;
                    grad[d] = (score(project_simplex(ap)) - cur) / fd;
                }
                double step = 0.5;
                bool improved = false;
                while (step > 1e-12) {
                    auto trial = alpha;
                    for (int d = 0; d < n - 1; ++d) trial[d] += step * grad[d];
                    trial = project_simplex(trial);
                    const double ts = score(trial);
                    if (ts > cur + 1e-15) {
                        const bool done = ts - cur < 1e-9;
                        alpha = trial;
                        cur = ts;
                        improved = !done;
                        break;
                    }
                    step *= 0.5;
                }
                if (!improved) break;
            }
            cands.push_back({cur, alpha});
        }
    }

    bool tie = false;
    const Candidate* best = pick_best(cands, &tie);
    SolveReport r = make_report(family, best->alpha, best->objective);
    r.tie = tie;

    // Shape sanity: second differences along random simplex segments must
    // match the declared curvature.
    Xoshiro256 rng(0xC0FFEE123456789ULL);
    bool mismatch = false;
    for (int trial = 0; trial < 6 && !mismatch; ++trial) {
        std::vector<double> a(n - 1), b(n - 1);
        double sa = 0.0, sb = 0.0;
        for (int d = 0; d < n - 1; ++d) {
            a[d] = rng.next_double();
            b[d] = rng.next_double();
            sa += a[d];
            sb += b[d];
        }
        for (int d = 0; d < n - 1; ++d) {
            a[d] /= sa;
            b[d] /= sb;
        }
        std::vector<double> mid(n - 1);
        for (int d = 0; d < n - 1; ++d) mid[d] = 0.5 * (a[d] + b[d]);
        const double second =
            score(mid) - 0.5 * (score(a) + score(b));
        if (shape == TransformShape::Concave && second < -1e-7) mismatch = true;
        if (shape == TransformShape::Convex && second > 1e-7) mismatch = true;
    }
    if (mismatch)
        r.warnings.push_back(
            "sampled objective curvature contradicts the declared shape");
    return r;
}

}  // namespace contestopt
