#include "contestopt/allocation_rules.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace contestopt {

namespace {

void check_profile(const GeneralContest& contest,
                   const std::vector<double>& profile) {
    if (static_cast<int>(profile.size()) != contest.n)
        throw std::invalid_argument("allocation_rule: profile length must be n");
    for (double v : profile)
        if (!(v >= 0.0 && v <= 1.0))
            throw std::domain_error("allocation_rule: ability outside [0,1]");
}

std::vector<double> zeros(size_t n) { return std::vector<double>(n, 0.0); }

// Equal split of the whole prize among the given index set.
std::vector<double> equal_split_set(size_t n, const std::vector<int>& who) {
    auto x = zeros(n);
    for (int i : who) x[static_cast<size_t>(i)] = 1.0 / who.size();
    return x;
}

std::vector<int> argmax_set(const std::vector<double>& v, double tol = 0.0) {
    const double m = *std::max_element(v.begin(), v.end());
    std::vector<int> who;
    for (size_t i = 0; i < v.size(); ++i)
        if (v[i] >= m - tol) who.push_back(static_cast<int>(i));
    return who;
}

}  // namespace

std::vector<double> allocation_rule(const GeneralContest& contest,
                                    const std::vector<double>& profile) {
    check_profile(contest, profile);
    const size_t n = profile.size();
    const auto& dist = contest.xi.dist();
    const double V_L = contest.xi.V_L.value_or(0.0);
    const double vmax = *std::max_element(profile.begin(), profile.end());

    switch (contest.kind) {
        case GeneralKind::BinaryOptimal: {
            if (contest.regime == Regime::UnitRange) {
                auto x = zeros(n);
                for (size_t i = 0; i < n; ++i)
                    if (profile[i] >= V_L) x[i] = 1.0;
                return x;
            }
            std::vector<int> who;
            for (size_t i = 0; i < n; ++i)
                if (profile[i] >= V_L) who.push_back(static_cast<int>(i));
            if (who.empty()) return zeros(n);
            return equal_split_set(n, who);
        }
        case GeneralKind::LinearRegularRange: {
            auto x = zeros(n);
            for (size_t i = 0; i < n; ++i)
                if (profile[i] >= V_L) x[i] = 1.0;
            return x;
        }
        case GeneralKind::LinearRegularSumNoSat: {
            if (vmax < V_L) return zeros(n);
            return equal_split_set(n, argmax_set(profile));
        }
        case GeneralKind::LinearRegularSumSat: {
            const double V_H = contest.xi.V_H.value_or(1.0);
            if (vmax < V_L) return zeros(n);
            if (vmax < V_H) return equal_split_set(n, argmax_set(profile));
            std::vector<int> pool;
            for (size_t i = 0; i < n; ++i)
                if (profile[i] >= V_H) pool.push_back(static_cast<int>(i));
            return equal_split_set(n, pool);
        }
        case GeneralKind::LinearIrregular: {
            if (vmax < V_L) return zeros(n);
            const double V_H = contest.xi.V_H.value_or(1.0);
            const auto& band = contest.ironed_band;
            const double r2 = band ? band->right_of(V_L) : V_L;
            const double l2 = band ? band->left_of(V_H) : V_H;
            if (vmax >= V_H && contest.xi.V_H) {
                std::vector<int> pool;
                for (size_t i = 0; i < n; ++i)
                    if (profile[i] >= V_H) pool.push_back(static_cast<int>(i));
                const double share =
                    n * contest.xi.xi(V_H) * (1.0 - dist.cdf(V_H)) /
                    (1.0 - std::pow(dist.cdf(V_H), n));
                auto x = zeros(n);
                for (int i : pool) x[i] = share / pool.size();
                return x;
            }
            if (vmax >= l2 && l2 < V_H) {
                // inside the flat adjoining the saturation point
                std::vector<int> pool;
                for (size_t i = 0; i < n; ++i)
                    if (profile[i] >= l2 && profile[i] <= V_H)
                        pool.push_back(static_cast<int>(i));
                const double num = std::pow(dist.cdf(V_H), n) -
                                   std::pow(dist.cdf(l2), n);
                if (num <= 0.0) return zeros(n);
                const double share = n * contest.xi.xi(l2) *
                                     (dist.cdf(V_H) - dist.cdf(l2)) / num;
                auto x = zeros(n);
                for (int i : pool) x[i] = share / pool.size();
                return x;
            }
            if (vmax <= r2 && r2 > V_L) {
                // inside the redistributed reserve flat
                std::vector<int> pool;
                for (size_t i = 0; i < n; ++i)
                    if (profile[i] >= V_L && profile[i] <= r2)
                        pool.push_back(static_cast<int>(i));
                const double num =
                    std::pow(dist.cdf(r2), n) - std::pow(dist.cdf(V_L), n);
                if (num <= 0.0) return zeros(n);
                const double share = n * contest.xi.xi(V_L) *
                                     (dist.cdf(r2) - dist.cdf(V_L)) / num;
                auto x = zeros(n);
                for (int i : pool) x[i] = share / pool.size();
                return x;
            }
            // middle band: ironed-virtual argmax, ties pooled across flats
            std::vector<double> score(n, -1e300);
            for (size_t i = 0; i < n; ++i) {
                if (profile[i] < V_L) continue;
                score[i] = band ? band->psibar(std::clamp(
                                      profile[i], band->interval_lo(),
                                      band->interval_hi()))
                                : profile[i];
            }
            auto who = argmax_set(score, 1e-12);
            std::vector<int> winners;
            for (int i : who)
                if (profile[static_cast<size_t>(i)] >= V_L)
                    winners.push_back(i);
            if (winners.empty()) return zeros(n);
            return equal_split_set(n, winners);
        }
    }
    return zeros(n);
}

double output_space_rule(const GeneralContest& contest, double b) {
    if (!(b >= 0.0))
        throw std::domain_error("output_space_rule: output must be >= 0");
    const auto& dist = contest.xi.dist();
    const int n = contest.n;
    const double V_L = contest.xi.V_L.value_or(0.0);
    const double t_lo = std::pow(dist.cdf(V_L), n - 1);
    if (contest.xi.V_H) {
        const double V_H = *contest.xi.V_H;
        const double t_hi = std::pow(dist.cdf(V_H), n - 1);
        const double cap = eta(dist.cdf(V_H), n);
        if (b < t_lo) return 0.0;
        if (b <= t_hi) return b;
        if (b < cap) return t_hi;
        return cap;
    }
    if (b < t_lo) return 0.0;
    return std::min(b, 1.0);
}

std::vector<double> allocation_from_outputs(
    const GeneralContest& contest, const std::vector<double>& outputs) {
    std::vector<double> abilities(outputs.size());
    for (size_t i = 0; i < outputs.size(); ++i) {
        if (!(outputs[i] >= 0.0))
            throw std::domain_error("allocation_from_outputs: negative output");
        abilities[i] = contest.xi.output_inverse(outputs[i]).value_or(1.0);
    }
    return allocation_rule(contest, abilities);
}

}  // namespace contestopt
