#include "contestopt/rank_contest.hpp"

#include <cmath>
#include <stdexcept>

#include "contestopt/numerics.hpp"

namespace contestopt {

ThresholdObjective ThresholdObjective::binary(double B) {
    if (!(B > 0.0)) throw std::invalid_argument("binary objective: B must be > 0");
    ThresholdObjective o;
    o.kind = Kind::Binary;
    o.B = B;
    return o;
}

ThresholdObjective ThresholdObjective::linear(double B_L, double B_H) {
    if (!(0.0 <= B_L && B_L < B_H && B_H <= 1.0))
        throw std::invalid_argument(
            "linear objective: need 0 <= B_L < B_H <= 1");
    ThresholdObjective o;
    o.kind = Kind::Linear;
    o.B_L = B_L;
    o.B_H = B_H;
    return o;
}

ThresholdObjective ThresholdObjective::total_output() {
    ThresholdObjective o;
    o.kind = Kind::TotalOutput;
    return o;
}

ThresholdObjective ThresholdObjective::transformed(
    std::function<double(double)> h, TransformShape shape) {
    if (!h) throw std::invalid_argument("transformed objective: null handle");
    ThresholdObjective o;
    o.kind = Kind::Transformed;
    o.h = std::move(h);
    o.shape = shape;
    return o;
}

std::string ThresholdObjective::name() const {
    switch (kind) {
        case Kind::Binary:
            return "binary(B=" + std::to_string(B) + ")";
        case Kind::Linear:
            return "linear(B_L=" + std::to_string(B_L) +
                   ",B_H=" + std::to_string(B_H) + ")";
        case Kind::TotalOutput:
            return "total_output";
        case Kind::Transformed:
            return shape == TransformShape::Convex ? "transformed(convex)"
                                                   : "transformed(concave)";
    }
    return "?";
}

RankContest::RankContest(std::shared_ptr<const BetaFamily> family,
                         std::vector<double> alpha)
    : family_(std::move(family)), alpha_(std::move(alpha)) {
    if (!family_) throw std::invalid_argument("RankContest: null family");
    const int n = family_->n();
    if (static_cast<int>(alpha_.size()) != n - 1)
        throw std::invalid_argument("RankContest: alpha must have n-1 entries");
    double sum = 0.0;
    for (double a : alpha_) {
        if (a < -1e-12)
            throw std::invalid_argument("RankContest: alpha_j >= 0 violated");
        sum += a;
    }
    if (sum > 1.0 + 1e-9)
        throw std::invalid_argument("RankContest: sum alpha_j <= 1 violated");
}

RankContest RankContest::from_alpha(std::shared_ptr<const BetaFamily> family,
                                    std::vector<double> alpha) {
    return RankContest(std::move(family), std::move(alpha));
}

RankContest RankContest::from_prizes(std::shared_ptr<const BetaFamily> family,
                                     std::vector<double> prizes) {
    if (!family) throw std::invalid_argument("RankContest: null family");
    const int n = family->n();
    if (static_cast<int>(prizes.size()) != n)
        throw std::invalid_argument("from_prizes: w must have n entries");
    prizes[n - 1] = 0.0;  // w_n = 0
    for (int j = 0; j < n; ++j) {
        if (prizes[j] < -1e-12)
            throw std::invalid_argument("from_prizes: w_" + std::to_string(j + 1) +
                                        " >= 0 violated");
        if (j + 1 < n && prizes[j] + 1e-12 < prizes[j + 1])
            throw std::invalid_argument("from_prizes: w_" + std::to_string(j + 1) +
                                        " >= w_" + std::to_string(j + 2) +
                                        " violated");
    }
    if (family->regime() == Regime::UnitSum) {
        double sum = 0.0;
        for (double w : prizes) sum += w;
        if (sum > 1.0 + 1e-9)
            throw std::invalid_argument("from_prizes: sum w_j <= 1 violated");
    } else {
        if (prizes[0] > 1.0 + 1e-12)
            throw std::invalid_argument("from_prizes: w_1 <= 1 violated");
    }
    std::vector<double> alpha(n - 1);
    for (int j = 1; j <= n - 1; ++j) {
        const double diff = prizes[j - 1] - prizes[j];
        alpha[j - 1] =
            (family->regime() == Regime::UnitSum) ? j * diff : diff;
    }
    return RankContest(std::move(family), std::move(alpha));
}

std::vector<double> RankContest::prizes() const {
    const int n = family_->n();
    std::vector<double> w(n, 0.0);
    for (int j = n - 1; j >= 1; --j) {
        const double diff = (regime() == Regime::UnitSum) ? alpha_[j - 1] / j
                                                          : alpha_[j - 1];
        w[j - 1] = w[j] + diff;
    }
    return w;
}

double eval_objective(const RankContest& contest,
                      const ThresholdObjective& objective) {
    const auto& dist = contest.family().dist();
    switch (objective.kind) {
        case ThresholdObjective::Kind::Binary: {
            const auto v = contest.inverse_output(objective.B);
            if (!v) return 0.0;
            return 1.0 - dist.cdf(*v);
        }
        case ThresholdObjective::Kind::Linear: {
            const double VL = contest.inverse_output(objective.B_L).value_or(1.0);
            const double VH = contest.inverse_output(objective.B_H).value_or(1.0);
            double obj = objective.B_L * dist.cdf(VL) +
                         objective.B_H * (1.0 - dist.cdf(VH));
            if (VH > VL)
                obj += integrate(
                    [&](double v) { return contest.output(v) * dist.pdf(v); },
                    VL, VH);
            return obj;
        }
        case ThresholdObjective::Kind::TotalOutput:
            return integrate(
                [&](double v) { return contest.output(v) * dist.pdf(v); }, 0.0,
                1.0);
        case ThresholdObjective::Kind::Transformed:
            return integrate(
                [&](double v) {
                    return objective.h(contest.output(v)) * dist.pdf(v);
                },
                0.0, 1.0);
    }
    return 0.0;
}

}  // namespace contestopt
