#pragma once

#include <memory>
#include <optional>
#include <stdexcept>

#include "contestopt/expected_allocation.hpp"
#include "contestopt/ironing.hpp"

namespace contestopt {

class InfeasibleError : public std::runtime_error {
public:
    explicit InfeasibleError(const std::string& what)
        : std::runtime_error(what) {}
};

enum class GeneralKind {
    BinaryOptimal,
    LinearRegularRange,
    LinearRegularSumNoSat,
    LinearRegularSumSat,
    LinearIrregular,
};

const char* general_kind_name(GeneralKind k);

// A synthesized general (all-pay-like) contest: the expected allocation plus
// the characteristic points the solver pinned down.
struct GeneralContest {
    GeneralContest(ExpectedAllocation xi_, GeneralKind kind_)
        : xi(std::move(xi_)), kind(kind_) {}

    ExpectedAllocation xi;
    GeneralKind kind;
    int n = 2;
    Regime regime = Regime::UnitSum;
    double B = 0.0;    // binary threshold
    double B_L = 0.0;  // linear thresholds
    double B_H = 1.0;
    std::optional<double> V_low, V_mid, V_up;
    double objective = 0.0;
    bool corner_case = false;
    bool experimental = false;
    // Irregular machinery: global ironing and the [V_L, V_H] band ironing
    // that the runtime allocation rule shares ties on.
    std::shared_ptr<const IronedVirtual> ironed;
    std::shared_ptr<const IronedVirtual> ironed_band;

    double output(double v) const { return xi.output(v); }
};

// Binary threshold. Unit-range: prize 1 to everyone with output >= B
// (reserve exactly B). Unit-sum: equal split of the prize among outputs
// >= B; the reserve ability solves B = V eta(F(V)).
GeneralContest optimize_binary_general(const AbilityDistribution& dist, int n,
                                       Regime regime, double B);

// Linear threshold for regular distributions (throws std::domain_error on an
// irregular input).
GeneralContest optimize_linear_regular(const AbilityDistribution& dist, int n,
                                       Regime regime, double B_L, double B_H);

// Linear threshold for arbitrary (possibly irregular) distributions,
// unit-sum: approximate search over (V_H, xi(V_H), V_L) with Myerson ironing.
GeneralContest optimize_linear_irregular(const AbilityDistribution& dist,
                                         int n, double B_L, double B_H,
                                         double search_resolution = 1.0 / 256);

// Unit-range irregular as the n=1 reduction of the unit-sum machinery.
// Flagged experimental in the report.
GeneralContest optimize_linear_irregular_range(const AbilityDistribution& dist,
                                               double B_L, double B_H,
                                               double search_resolution =
                                                   1.0 / 256);

}  // namespace contestopt
