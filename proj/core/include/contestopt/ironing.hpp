#pragma once

#include <vector>

#include "contestopt/distribution.hpp"

namespace contestopt {

struct FlatSegment {
    double l = 0.0;  // ability-space endpoints of an ironed interval
    double r = 0.0;
    double slope = 0.0;  // psibar on the flat
};

// Ironed interval virtual ability on [U,V]:
//   h(y)    = psi_{U,V}(Q(y)) in quantile space,
//   H(y)    = int_{F(U)}^{y} h,
//   Hbar    = lower convex envelope of the sampled (y, H) graph,
//   hbar    = slope of Hbar,  psibar(v) = hbar(F(v)).
// H is accumulated in ability space as int (v f(v) - (F(V)-F(v))) dv, which
// stays bounded where f vanishes.
class IronedVirtual {
public:
    IronedVirtual(const AbilityDistribution& dist, double U, double V,
                  int knot_count = 4096);

    double interval_lo() const { return U_; }
    double interval_hi() const { return V_; }

    const std::vector<double>& knot_y() const { return y_; }
    const std::vector<double>& knot_v() const { return v_; }
    const std::vector<double>& knot_H() const { return H_; }
    const std::vector<double>& knot_Hbar() const { return Hbar_; }
    // hbar at knot i = slope of the envelope edge covering [y_i, y_{i+1});
    // the last entry repeats the final edge slope.
    const std::vector<double>& knot_hbar() const { return hbar_; }

    const std::vector<FlatSegment>& flat_segments() const { return flats_; }

    double hbar(double y) const;
    double psibar(double v) const;
    // Endpoints of the flat containing v (or v itself when unironed).
    double left_of(double v) const;
    double right_of(double v) const;
    bool is_ironed_at(double v) const;

    // max over knots of H - Hbar (0 for convex H, i.e. regular psi_{U,V}).
    double max_envelope_gap() const { return max_gap_; }

private:
    double U_, V_;
    std::vector<double> y_, v_, H_, Hbar_, hbar_;
    std::vector<size_t> hull_;          // knot indices of envelope vertices
    std::vector<double> hull_slope_;    // per envelope edge
    std::vector<FlatSegment> flats_;
    double max_gap_ = 0.0;

    size_t edge_of(double y) const;
};

inline IronedVirtual iron(const AbilityDistribution& dist, double U, double V,
                          int knot_count = 4096) {
    return IronedVirtual(dist, U, V, knot_count);
}

}  // namespace contestopt
