#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace contestopt {

// Below this density, virtual-ability evaluation refuses and reports the
// point instead of returning +-inf.
inline constexpr double kDensityFloor = 1e-9;

class SingularDensityError : public std::domain_error {
public:
    SingularDensityError(double v, double f)
        : std::domain_error("density " + std::to_string(f) +
                            " at v=" + std::to_string(v) +
                            " is below the density floor"),
          point(v) {}
    double point;
};

enum class DistKind { Uniform, Power, PiecewiseLinearCdf, Mixture };

// Continuous ability distribution on [0,1]. Immutable after construction;
// safe to share across threads.
class AbilityDistribution {
public:
    struct Component {
        double weight;
        std::shared_ptr<const AbilityDistribution> dist;
    };

    static AbilityDistribution uniform();
    static AbilityDistribution power(double k);
    // Breakpoints: ascending (v, F(v)) pairs from (0,0) to (1,1).
    static AbilityDistribution piecewise_cdf(
        std::vector<std::pair<double, double>> points);
    static AbilityDistribution mixture(
        std::vector<std::pair<double, AbilityDistribution>> components);

    DistKind kind() const { return kind_; }
    double power_exponent() const { return k_; }
    const std::vector<std::pair<double, double>>& breakpoints() const {
        return points_;
    }
    const std::vector<Component>& components() const { return components_; }

    double cdf(double v) const;
    // Right-continuous convention at piecewise breakpoints.
    double pdf(double v) const;
    // (F(v), f(v)); domain error outside [0,1].
    std::pair<double, double> evaluate(double v) const;
    // min v with F(v) >= p.
    double quantile(double p) const;

    // psi(v) = v - (1 - F(v)) / f(v); SingularDensityError below the floor.
    double virtual_ability(double v) const;
    // psi_u(v) = v - (F(u) - F(v)) / f(v), for v <= u. psi_1 == psi.
    double interval_virtual(double u, double v) const;

    struct RegularityReport {
        bool regular = true;
        double violation_point = 0.0;  // meaningful when !regular
        int skipped = 0;               // grid points under the density floor
    };
    // Finite-difference scan of psi on a uniform grid.
    RegularityReport is_regular(int grid_size = 2001, double tol = 1e-9) const;

    // int_lo^hi F(v)^m dv. Exact per-segment antiderivatives for Uniform,
    // Power and PiecewiseLinearCdf; adaptive quadrature for mixtures.
    double cdf_power_integral(double lo, double hi, int m) const;

    // Interior points where the density jumps (piecewise breakpoints,
    // collected recursively through mixtures). Useful as forced quadrature
    // and interpolation knots.
    std::vector<double> density_breakpoints() const;

    std::string describe() const;

private:
    AbilityDistribution() = default;

    DistKind kind_ = DistKind::Uniform;
    double k_ = 1.0;                                  // Power
    std::vector<std::pair<double, double>> points_;   // PiecewiseLinearCdf
    std::vector<Component> components_;               // Mixture
};

}  // namespace contestopt
