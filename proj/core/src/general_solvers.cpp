#include "contestopt/general_contest.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "contestopt/numerics.hpp"
#include "contestopt/order_stats.hpp"
#include "contestopt/parallel.hpp"

namespace contestopt {

const char* general_kind_name(GeneralKind k) {
    switch (k) {
        case GeneralKind::BinaryOptimal: return "binary_optimal";
        case GeneralKind::LinearRegularRange: return "linear_regular_range";
        case GeneralKind::LinearRegularSumNoSat: return "linear_regular_sum_nosat";
        case GeneralKind::LinearRegularSumSat: return "linear_regular_sum_sat";
        case GeneralKind::LinearIrregular: return "linear_irregular";
    }
    return "?";
}

namespace {

ExpectedAllocation step_allocation(const AbilityDistribution& dist, int n,
                                   Regime regime, double V, double level) {
    std::vector<XiSegment> segs;
    if (V > 0.0) segs.push_back({0.0, V, SegForm::Zero, 0.0, 0.0, 0.0});
    segs.push_back({V, 1.0, SegForm::Constant, level, 0.0, 0.0});
    ExpectedAllocation xi(dist, n, regime, std::move(segs));
    xi.V_L = V;
    return xi;
}

// psi^{-1}(target) by grid bracket + bisection, skipping singular points.
double psi_inverse(const AbilityDistribution& dist, double target) {
    const int cells = 1000;
    double prev_v = -1.0, prev_psi = 0.0;
    for (int k = 0; k <= cells; ++k) {
        const double v = static_cast<double>(k) / cells;
        double psi;
        try {
            psi = dist.virtual_ability(v);
        } catch (const SingularDensityError&) {
            continue;
        }
        if (psi >= target) {
            if (prev_v < 0.0) return v;
            return bisect_min_above(
                [&](double x) {
                    try {
                        return dist.virtual_ability(x);
                    } catch (const SingularDensityError&) {
                        return prev_psi;  // treat singular points as below
                    }
                },
                prev_v, v, target);
        }
        prev_v = v;
        prev_psi = psi;
    }
    return 1.0;
}

}  // namespace

GeneralContest optimize_binary_general(const AbilityDistribution& dist, int n,
                                       Regime regime, double B) {
    if (!(B > 0.0))
        throw std::invalid_argument("optimize_binary_general: B must be > 0");
    if (regime == Regime::UnitRange) {
        if (B > 1.0)
            throw InfeasibleError("binary threshold exceeds the unit-range supremum 1");
        GeneralContest c{step_allocation(dist, n, regime, B, 1.0),
                         GeneralKind::BinaryOptimal};
        c.n = n;
        c.regime = regime;
        c.B = B;
        c.objective = 1.0 - dist.cdf(B);
        return c;
    }
    if (n < 2)
        throw std::invalid_argument("optimize_binary_general: unit-sum needs n >= 2");
    // sup_V V eta(F(V)) = 1 at V = 1.
    if (B >= 1.0)
        throw InfeasibleError("binary threshold exceeds the unit-sum supremum 1");
    const auto g = [&](double V) { return V * eta(dist.cdf(V), n); };
    const double V = bisect_min_above(g, 0.0, 1.0, B, 200);
    GeneralContest c{step_allocation(dist, n, regime, V, eta(dist.cdf(V), n)),
                     GeneralKind::BinaryOptimal};
    c.n = n;
    c.regime = regime;
    c.B = B;
    c.objective = 1.0 - dist.cdf(V);
    return c;
}

namespace {

struct RegularCandidate {
    double V_L = 0.0;
    std::optional<double> V_H;
    double objective = -1e300;
    bool valid = false;
};

// xi for the saturated family: 0 | F^{n-1} on [V_L, V_H) | eta(F(V_H)).
ExpectedAllocation saturated_xi(const AbilityDistribution& dist, int n,
                                double V_L, double V_H) {
    std::vector<XiSegment> segs;
    if (V_L > 0.0) segs.push_back({0.0, V_L, SegForm::Zero, 0, 0, 0});
    if (V_H > V_L) segs.push_back({V_L, V_H, SegForm::CdfPower, 0, 0, 0});
    segs.push_back({V_H, 1.0, SegForm::Constant, eta(dist.cdf(V_H), n), 0, 0});
    ExpectedAllocation xi(dist, n, Regime::UnitSum, std::move(segs));
    xi.V_L = V_L;
    xi.V_H = V_H;
    return xi;
}

ExpectedAllocation nosat_xi(const AbilityDistribution& dist, int n,
                            double V_L) {
    std::vector<XiSegment> segs;
    if (V_L > 0.0) segs.push_back({0.0, V_L, SegForm::Zero, 0, 0, 0});
    segs.push_back({V_L, 1.0, SegForm::CdfPower, 0, 0, 0});
    ExpectedAllocation xi(dist, n, Regime::UnitSum, std::move(segs));
    xi.V_L = V_L;
    return xi;
}

}  // namespace

GeneralContest optimize_linear_regular(const AbilityDistribution& dist, int n,
                                       Regime regime, double B_L, double B_H) {
    if (!(0.0 <= B_L && B_L < B_H && B_H <= 1.0))
        throw std::invalid_argument("optimize_linear_regular: need 0 <= B_L < B_H <= 1");
    const auto reg = dist.is_regular();
    if (!reg.regular)
        throw std::domain_error(
            "optimize_linear_regular: distribution is irregular (psi decreases near v=" +
            std::to_string(reg.violation_point) + "); use the irregular solver");

    if (regime == Regime::UnitRange) {
        const double Vstar = psi_inverse(dist, B_L);
        const double V = std::max(B_L, std::min(B_H, Vstar));
        GeneralContest c{step_allocation(dist, n, regime, V, 1.0),
                         GeneralKind::LinearRegularRange};
        c.n = n;
        c.regime = regime;
        c.B_L = B_L;
        c.B_H = B_H;
        c.objective = B_L * dist.cdf(V) + V * (1.0 - dist.cdf(V));
        return c;
    }
    if (n < 2)
        throw std::invalid_argument("optimize_linear_regular: unit-sum needs n >= 2");

    const auto F = [&](double v) { return dist.cdf(v); };
    const auto Fpow = [&](double v) { return std::pow(F(v), n - 1); };

    // Characteristic points.
    const double V_low =
        (B_L <= 0.0) ? 0.0
                     : bisect_min_above([&](double v) { return v * Fpow(v); },
                                        0.0, 1.0, B_L, 200);
    std::optional<double> V_mid;
    if (dist.cdf_power_integral(0.0, 1.0, n - 1) >= 1.0 - B_H)
        V_mid = bisect_root(
            [&](double v) {
                return (1.0 - B_H) - dist.cdf_power_integral(v, 1.0, n - 1);
            },
            0.0, 1.0, 200);
    const double V_up =
        (B_H >= 1.0) ? 1.0
                     : bisect_min_above(
                           [&](double v) { return v * eta(F(v), n); }, 0.0,
                           1.0, B_H, 200);

    std::vector<RegularCandidate> cands;

    // Case 1: beta never reaches B_H. Reserve from B_L/F^{n-1} = psi.
    if (V_mid) {
        double Vbar;
        if (B_L <= 0.0) {
            Vbar = psi_inverse(dist, 0.0);
        } else {
            // decreasing - increasing: root of B_L / F^{n-1} - psi
            const auto phi = [&](double v) -> double {
                const double p = Fpow(v);
                if (p < 1e-300) return 1e300;
                double psi;
                try {
                    psi = dist.virtual_ability(v);
                } catch (const SingularDensityError&) {
                    return 1e300;
                }
                return B_L / p - psi;
            };
            Vbar = bisect_root(phi, 1e-9, 1.0, 200);
        }
        const double V_L = std::min(*V_mid, std::max(V_low, Vbar));
        ExpectedAllocation xi = nosat_xi(dist, n, V_L);
        if (xi.output(1.0) <= B_H + 1e-8) {
            RegularCandidate c;
            c.V_L = V_L;
            c.objective = linear_objective(xi, B_L, B_H);
            c.valid = true;
            cands.push_back(c);
        }
    }

    // Case 2: saturated. V_H(V_L) is pinned by beta(V_H) = B_H; the paper's
    // first-order condition drops the boundary term from beta's jump at V_H,
    // so the scan maximizes the objective directly along the constraint
    // (the FOC point is still scored as one of the candidates).
    {
        const double vl_lo = V_mid.value_or(0.0);
        const double vl_hi = V_up;
        const auto VH_of = [&](double V_L) -> std::optional<double> {
            const auto C = [&](double VH) {
                return VH * eta(F(VH), n) -
                       dist.cdf_power_integral(V_L, VH, n - 1);
            };
            if (C(V_L) > B_H + 1e-12) return std::nullopt;
            if (C(1.0) < B_H - 1e-12) return std::nullopt;
            return bisect_min_above(C, V_L, 1.0, B_H, 200);
        };
        const auto score = [&](double V_L) -> double {
            const auto VH = VH_of(V_L);
            if (!VH) return -1e300;
            return linear_objective(saturated_xi(dist, n, V_L, *VH), B_L, B_H);
        };
        if (vl_hi > vl_lo) {
            // Grid bracket + golden refinement of the honest objective.
            const int cells = 400;
            double best_v = vl_lo, best_s = -1e300;
            for (int k = 0; k <= cells; ++k) {
                const double v = vl_lo + (vl_hi - vl_lo) * k / cells;
                const double s = score(v);
                if (s > best_s) {
                    best_s = s;
                    best_v = v;
                }
            }
            if (best_s > -1e299) {
                const double w = (vl_hi - vl_lo) / cells;
                const double refined = golden_max(
                    score, std::max(vl_lo, best_v - w),
                    std::min(vl_hi, best_v + w), 1e-11);
                const double pick = score(refined) >= best_s ? refined : best_v;
                const auto VH = VH_of(pick);
                if (VH) {
                    RegularCandidate c;
                    c.V_L = pick;
                    c.V_H = *VH;
                    c.objective = score(pick);
                    c.valid = true;
                    cands.push_back(c);
                }
            }
            // Paper FOC point: B_L/F(V_L)^{n-1} = psi_{V_H}(V_L) along the
            // constraint, clamped per the theorem statement.
            const auto foc = [&](double V_L) -> double {
                const auto VH = VH_of(V_L);
                if (!VH) return 1e300;
                const double p = Fpow(V_L);
                double psiu;
                try {
                    psiu = dist.interval_virtual(*VH, V_L);
                } catch (const SingularDensityError&) {
                    return 1e300;
                }
                if (B_L <= 0.0) return -psiu;
                if (p < 1e-300) return 1e300;
                return B_L / p - psiu;
            };
            double prev = std::numeric_limits<double>::quiet_NaN();
            for (int k = 0; k <= cells; ++k) {
                const double v = vl_lo + (vl_hi - vl_lo) * k / cells;
                const double cur = foc(v);
                if (std::abs(cur) < 1e299 && !std::isnan(prev) &&
                    ((prev > 0) != (cur > 0))) {
                    const double root = bisect_root(
                        foc, vl_lo + (vl_hi - vl_lo) * (k - 1) / cells, v, 100);
                    const double Vbar_L = std::min(V_up, std::max(V_mid.value_or(0.0), root));
                    const auto VH0 = VH_of(Vbar_L);
                    if (VH0) {
                        const double Vbar_H = std::min(1.0, std::max(V_up, *VH0));
                        ExpectedAllocation xi =
                            saturated_xi(dist, n, Vbar_L, Vbar_H);
                        if (xi.output(1.0) <= B_H + 1e-8) {
                            RegularCandidate c;
                            c.V_L = Vbar_L;
                            c.V_H = Vbar_H;
                            c.objective = linear_objective(xi, B_L, B_H);
                            c.valid = true;
                            cands.push_back(c);
                        }
                    }
                    break;
                }
                prev = cur;
            }
        }
        // Boundary collapse V_L = V_H = V_up (binary-style).
        {
            ExpectedAllocation xi = saturated_xi(dist, n, V_up, V_up);
            if (xi.output(1.0) <= B_H + 1e-8) {
                RegularCandidate c;
                c.V_L = V_up;
                c.V_H = V_up;
                c.objective = linear_objective(xi, B_L, B_H);
                c.valid = true;
                cands.push_back(c);
            }
        }
    }

    if (cands.empty())
        throw std::logic_error("optimize_linear_regular: no feasible candidate");
    const auto best = std::max_element(
        cands.begin(), cands.end(),
        [](const RegularCandidate& a, const RegularCandidate& b) {
            return a.objective < b.objective;
        });

    GeneralContest c{
        best->V_H ? saturated_xi(dist, n, best->V_L, *best->V_H)
                  : nosat_xi(dist, n, best->V_L),
        best->V_H ? GeneralKind::LinearRegularSumSat
                  : GeneralKind::LinearRegularSumNoSat};
    c.n = n;
    c.regime = regime;
    c.B_L = B_L;
    c.B_H = B_H;
    c.V_low = V_low;
    c.V_mid = V_mid;
    c.V_up = V_up;
    c.objective = best->objective;
    return c;
}

// ---------------------------------------------------------------------------
// Irregular search
// ---------------------------------------------------------------------------

namespace {

// Sampled base integral BASE(v) = int_0^v (t f(t) + F(t)) dt on a fixed knot
// grid in quantile space. H_{.,W}(v) = BASE(v) - F(W) v + const, so one base
// array serves every candidate upper end W.
struct IroningBase {
    std::vector<double> y, v, base;

    IroningBase(const AbilityDistribution& dist, int knots) {
        y.resize(knots);
        v.resize(knots);
        base.resize(knots);
        for (int i = 0; i < knots; ++i) {
            y[i] = static_cast<double>(i) / (knots - 1);
            v[i] = dist.quantile(y[i]);
        }
        v.front() = 0.0;
        v.back() = 1.0;
        base[0] = 0.0;
        for (int i = 1; i < knots; ++i)
            base[i] = base[i - 1] +
                      integrate(
                          [&](double t) {
                              return t * dist.pdf(t) + dist.cdf(t);
                          },
                          v[i - 1], v[i], 1e-13, 24);
    }

    size_t index_of_y(double yy) const {
        const double t = yy * (y.size() - 1);
        return std::min(static_cast<size_t>(std::max(0.0, t)), y.size() - 1);
    }
};

// Lower convex hull of the band [a_idx, b_idx] of (y, H_W) knots.
// Returns hull knot indices.
std::vector<size_t> band_hull(const IroningBase& ib, double FW, size_t a_idx,
                              size_t b_idx) {
    std::vector<size_t> hull;
    for (size_t i = a_idx; i <= b_idx; ++i) {
        const double Hi = ib.base[i] - FW * ib.v[i];
        while (hull.size() >= 2) {
            const size_t p = hull[hull.size() - 2];
            const size_t q = hull[hull.size() - 1];
            const double Hp = ib.base[p] - FW * ib.v[p];
            const double Hq = ib.base[q] - FW * ib.v[q];
            const double cross = (ib.y[q] - ib.y[p]) * (Hi - Hp) -
                                 (Hq - Hp) * (ib.y[i] - ib.y[p]);
            if (cross <= 0.0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(i);
    }
    return hull;
}

struct BandStructure {
    // Flats of the band ironing, in ability space, plus the band edges.
    std::vector<FlatSegment> flats;
    double lo, hi;

    double right_of(double v) const {
        for (const auto& f : flats)
            if (f.l <= v && v < f.r) return f.r;
        return v;
    }
    double left_of(double v) const {
        for (const auto& f : flats)
            if (f.l < v && v <= f.r) return f.l;
        return v;
    }
};

BandStructure band_structure(const IroningBase& ib, double FW, double lo,
                             double hi, double Flo, double gap_tol = 1e-11) {
    BandStructure bs;
    bs.lo = lo;
    bs.hi = hi;
    const size_t a = ib.index_of_y(Flo);
    const size_t b = ib.index_of_y(FW);
    if (b <= a + 1) return bs;
    auto hull = band_hull(ib, FW, a, b);
    for (size_t e = 0; e + 1 < hull.size(); ++e) {
        const size_t p = hull[e], q = hull[e + 1];
        if (q <= p + 1) continue;
        const double Hp = ib.base[p] - FW * ib.v[p];
        const double Hq = ib.base[q] - FW * ib.v[q];
        double worst = 0.0;
        for (size_t i = p + 1; i < q; ++i) {
            const double t = (ib.y[i] - ib.y[p]) / (ib.y[q] - ib.y[p]);
            const double Hi = ib.base[i] - FW * ib.v[i];
            worst = std::max(worst, Hi - (Hp + t * (Hq - Hp)));
        }
        if (worst > gap_tol)
            bs.flats.push_back({std::max(lo, ib.v[p]), std::min(hi, ib.v[q]),
                                (Hq - Hp) / (ib.y[q] - ib.y[p])});
    }
    return bs;
}

struct IrregularCandidate {
    double objective = -1e300;
    std::vector<XiSegment> segs;
    double V_L = 0.0;
    std::optional<double> V_H;
    bool corner = false;
};

// Middle structure on [lo, hi): CdfPower where unironed, equal-split
// constants on flats; the flat containing `lo` keeps CdfPower up to its
// right end (partial coverage), per the search's step-3 convention.
void append_middle(std::vector<XiSegment>& segs, const AbilityDistribution& d,
                   int n, const BandStructure& bs, double lo, double hi) {
    double v = lo;
    const double keep_until = bs.right_of(lo);
    if (keep_until > lo) {
        const double end = std::min(keep_until, hi);
        segs.push_back({v, end, SegForm::CdfPower, 0, 0, 0});
        v = end;
    }
    while (v < hi - 1e-14) {
        const FlatSegment* next_flat = nullptr;
        for (const auto& f : bs.flats)
            if (f.l >= v - 1e-14 && f.l < hi - 1e-14 && f.r > v + 1e-14) {
                next_flat = &f;
                break;
            }
        if (!next_flat) {
            segs.push_back({v, hi, SegForm::CdfPower, 0, 0, 0});
            break;
        }
        if (next_flat->l > v + 1e-14)
            segs.push_back({v, next_flat->l, SegForm::CdfPower, 0, 0, 0});
        const double fr = std::min(next_flat->r, hi);
        const double fl = std::max(next_flat->l, v);
        segs.push_back({fl, fr, SegForm::IronedFlat,
                        expected_equal_split_cdf(d.cdf(next_flat->l),
                                                 d.cdf(next_flat->r), n),
                        next_flat->l, next_flat->r});
        v = fr;
    }
}

}  // namespace

GeneralContest optimize_linear_irregular(const AbilityDistribution& dist,
                                         int n, double B_L, double B_H,
                                         double search_resolution) {
    if (!(0.0 <= B_L && B_L < B_H && B_H <= 1.0))
        throw std::invalid_argument("optimize_linear_irregular: need 0 <= B_L < B_H <= 1");
    if (n < 1)
        throw std::invalid_argument("optimize_linear_irregular: n must be >= 1");
    if (!(search_resolution > 0.0 && search_resolution <= 0.25))
        throw std::invalid_argument("optimize_linear_irregular: bad resolution");

    const int steps = static_cast<int>(std::lround(1.0 / search_resolution));
    const auto global = std::make_shared<IronedVirtual>(dist, 0.0, 1.0, 4096);
    IroningBase ib(dist, 4096);

    const auto F = [&](double v) { return dist.cdf(v); };

    const auto consider = [&](IrregularCandidate& slot,
                              std::vector<XiSegment> segs, double V_L,
                              std::optional<double> V_H, bool corner) {
        try {
            ExpectedAllocation xi(dist, n, Regime::UnitSum, segs);
            xi.V_L = V_L;
            xi.V_H = V_H;
            if (!xi.is_monotone(1e-9)) return;
            if (xi.output(1.0) > B_H + 1e-8) return;
            const auto mat = matthews_feasible(xi, 501);
            if (!mat.feasible) return;
            const double obj = linear_objective(xi, B_L, B_H);
            if (obj > slot.objective + 1e-15) {
                slot.objective = obj;
                slot.segs = std::move(segs);
                slot.V_L = V_L;
                slot.V_H = V_H;
                slot.corner = corner;
            }
        } catch (const std::invalid_argument&) {
            // malformed assembly at a numerical edge: not a candidate
        }
    };

    IrregularCandidate best;

    // ---- Family B: no saturation. Band-iron [V_L, 1], right-packed.
    for (int k = 0; k < steps; ++k) {
        const double V_L = static_cast<double>(k) / steps;
        const auto bs = band_structure(ib, 1.0, V_L, 1.0, F(V_L));
        std::vector<XiSegment> segs;
        if (V_L > 0.0) segs.push_back({0.0, V_L, SegForm::Zero, 0, 0, 0});
        // Flat containing V_L in the band ironing starts at V_L, so its
        // equal-split constant applies from V_L.
        double v = V_L;
        const double r0 = bs.right_of(V_L);
        if (r0 > V_L + 1e-14) {
            segs.push_back({V_L, r0, SegForm::IronedFlat,
                            expected_equal_split_cdf(F(V_L), F(r0), n), V_L,
                            r0});
            v = r0;
        }
        if (v < 1.0) append_middle(segs, dist, n, bs, v, 1.0);
        if (segs.empty()) continue;
        consider(best, std::move(segs), V_L, std::nullopt, false);
    }

    // ---- Family A: saturated at V_H with level xi_H. The V_H grid scan is
    // data-parallel; slots are merged in index order afterwards.
    std::vector<IrregularCandidate> slot_best(steps);
    parallel_slots(steps, [&](long slot) {
        const int kv = static_cast<int>(slot) + 1;
        IrregularCandidate& sbest = slot_best[slot];
        const double V_H = static_cast<double>(kv) / steps;
        const double FH = F(V_H);
        const double eta_H = eta(FH, n);
        const double l_VH = global->left_of(V_H);

        for (int kx = 0; kx <= steps; ++kx) {
            const double xi_H = static_cast<double>(kx) / steps;
            if (xi_H > std::min(1.0, eta_H) + 1e-12) break;
            if (xi_H <= 0.0) continue;

            double top_lo = V_H;
            double c_H = xi_H;
            std::vector<XiSegment> top;
            if (l_VH < V_H - 1e-12) {
                // Flatten xi on [l(V_H), V_H); right-packing at l(V_H) gives
                // the constant.
                c_H = ((1.0 - std::pow(F(l_VH), n)) / n -
                       xi_H * (1.0 - FH)) /
                      (FH - F(l_VH));
                if (c_H < -1e-12 || c_H > xi_H + 1e-12) {
                    // Try the corner case below before giving up.
                    c_H = -1.0;
                } else {
                    top_lo = l_VH;
                    top.push_back({l_VH, V_H, SegForm::Constant, c_H, 0, 0});
                }
            }
            top.push_back({V_H, 1.0, SegForm::Constant, xi_H, 0, 0});

            const auto beta_VH = [&](double VbarL) {
                // Assemble the step-3 xi below top_lo and return beta(V_H).
                std::vector<XiSegment> segs;
                if (VbarL > 0.0)
                    segs.push_back({0.0, VbarL, SegForm::Zero, 0, 0, 0});
                if (VbarL < top_lo) {
                    BandStructure gb;
                    gb.lo = 0.0;
                    gb.hi = 1.0;
                    gb.flats = global->flat_segments();
                    append_middle(segs, dist, n, gb, VbarL, top_lo);
                }
                for (const auto& s : top) segs.push_back(s);
                ExpectedAllocation xi(dist, n, Regime::UnitSum, segs);
                return std::make_pair(xi.output(V_H), std::move(segs));
            };

            if (c_H >= 0.0) {
                const double b_hi = beta_VH(top_lo).first;
                const double b_lo = beta_VH(0.0).first;
                if (B_H <= b_hi + 1e-10 && B_H >= b_lo - 1e-10) {
                    double lo = 0.0, hi = top_lo;
                    for (int it = 0; it < 60; ++it) {
                        const double mid = 0.5 * (lo + hi);
                        if (beta_VH(mid).first < B_H)
                            lo = mid;
                        else
                            hi = mid;
                    }
                    const double VbarL = 0.5 * (lo + hi);
                    auto [bv, segs] = beta_VH(VbarL);
                    (void)bv;
                    consider(sbest, segs, VbarL, V_H, false);

                    // Step 4: V_L strictly inside a flat -> redistribute on
                    // [V_L, r_{V_L,V_H}(V_L)] preserving the Lebesgue area.
                    const double lbar = global->left_of(VbarL);
                    const double rbar = global->right_of(VbarL);
                    if (lbar < VbarL && rbar > VbarL && rbar <= top_lo + 1e-12) {
                        const int sub = std::max(
                            2, static_cast<int>((rbar - lbar) * steps));
                        for (int q = 0; q <= sub; ++q) {
                            const double V_L =
                                lbar + (rbar - lbar) * q / sub;
                            const auto bsub = band_structure(
                                ib, FH, V_L, V_H, F(V_L));
                            double r2 = std::min(bsub.right_of(V_L), rbar);
                            if (r2 <= V_L + 1e-12) continue;
                            const double area_keep =
                                dist.cdf_power_integral(VbarL, r2, n - 1);
                            const double level = area_keep / (r2 - V_L);
                            if (level < -1e-12 ||
                                level > std::pow(F(r2), n - 1) + 1e-9)
                                continue;
                            if (V_L * level < B_L - 1e-12) continue;
                            std::vector<XiSegment> s2;
                            if (V_L > 0.0)
                                s2.push_back({0.0, V_L, SegForm::Zero, 0, 0, 0});
                            s2.push_back({V_L, r2, SegForm::IronedFlat, level,
                                          V_L, r2});
                            if (r2 < top_lo) {
                                BandStructure gb;
                                gb.lo = 0.0;
                                gb.hi = 1.0;
                                gb.flats = global->flat_segments();
                                append_middle(s2, dist, n, gb, r2, top_lo);
                            }
                            for (const auto& s : top) s2.push_back(s);
                            consider(sbest, std::move(s2), V_L, V_H, false);
                        }
                    }
                }
            }

            // Corner case: the reserve must live inside [l(V_H), V_H].
            if (l_VH < V_H - 1e-12) {
                const auto corner_segs =
                    [&](double V_L) -> std::vector<XiSegment> {
                    const auto bsub = band_structure(ib, FH, V_L, V_H, F(V_L));
                    // Left end of the band flat containing V_H (V_L when the
                    // whole band irons into one flat).
                    const double l2 = bsub.left_of(V_H);
                    std::vector<XiSegment> segs;
                    if (V_L > 0.0)
                        segs.push_back({0.0, V_L, SegForm::Zero, 0, 0, 0});
                    double c2 = xi_H;
                    double mid_hi = V_H;
                    if (l2 < V_H - 1e-14) {
                        c2 = ((1.0 - std::pow(F(l2), n)) / n -
                              xi_H * (1.0 - FH)) /
                             (FH - F(l2));
                        if (c2 < -1e-12 || c2 > xi_H + 1e-12) return {};
                        mid_hi = std::max(V_L, l2);
                    }
                    if (mid_hi > V_L + 1e-14)
                        append_middle(segs, dist, n, bsub, V_L, mid_hi);
                    if (mid_hi < V_H)
                        segs.push_back(
                            {mid_hi, V_H, SegForm::Constant, c2, 0, 0});
                    segs.push_back({V_H, 1.0, SegForm::Constant, xi_H, 0, 0});
                    return segs;
                };
                const auto beta_at = [&](double V_L) -> double {
                    auto segs = corner_segs(V_L);
                    if (segs.empty()) return 1e300;
                    try {
                        ExpectedAllocation xi(dist, n, Regime::UnitSum, segs);
                        return xi.output(V_H);
                    } catch (const std::invalid_argument&) {
                        return 1e300;
                    }
                };
                const double blo = beta_at(l_VH);
                const double bhi = beta_at(V_H - 1e-9);
                if (blo < 1e299 && bhi < 1e299 && blo <= B_H && B_H <= bhi) {
                    double lo = l_VH, hi = V_H - 1e-9;
                    for (int it = 0; it < 50; ++it) {
                        const double mid = 0.5 * (lo + hi);
                        const double bm = beta_at(mid);
                        if (bm < B_H)
                            lo = mid;
                        else
                            hi = mid;
                    }
                    const double V_L = 0.5 * (lo + hi);
                    auto segs = corner_segs(V_L);
                    if (!segs.empty())
                        consider(sbest, std::move(segs), V_L, V_H, true);
                }
            }
        }
    });

    for (auto& sbest : slot_best)
        if (sbest.objective > best.objective + 1e-15) best = std::move(sbest);

    // Degenerate floor: no prize at all (objective B_L).
    consider(best, {{0.0, 1.0, SegForm::Zero, 0, 0, 0}}, 1.0, std::nullopt,
             false);

    if (best.objective < -1e299)
        throw std::logic_error("optimize_linear_irregular: no feasible candidate");

    ExpectedAllocation xi(dist, n, Regime::UnitSum, best.segs);
    xi.V_L = best.V_L;
    xi.V_H = best.V_H;
    GeneralContest c{std::move(xi), GeneralKind::LinearIrregular};
    c.n = n;
    c.regime = Regime::UnitSum;
    c.B_L = B_L;
    c.B_H = B_H;
    c.objective = best.objective;
    c.corner_case = best.corner;
    c.ironed = global;
    if (best.V_H && best.V_L < *best.V_H - 1e-9)
        c.ironed_band = std::make_shared<IronedVirtual>(dist, best.V_L,
                                                        *best.V_H, 2048);
    else if (best.V_L < 1.0 - 1e-9)
        c.ironed_band =
            std::make_shared<IronedVirtual>(dist, best.V_L, 1.0, 2048);
    return c;
}

GeneralContest optimize_linear_irregular_range(const AbilityDistribution& dist,
                                               double B_L, double B_H,
                                               double search_resolution) {
    GeneralContest c =
        optimize_linear_irregular(dist, 1, B_L, B_H, search_resolution);
    c.regime = Regime::UnitRange;
    c.experimental = true;
    return c;
}

}  // namespace contestopt
