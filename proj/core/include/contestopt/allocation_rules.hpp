#pragma once

#include <vector>

#include "contestopt/general_contest.hpp"

namespace contestopt {

// Ex-post prize shares for one ability profile (length n). Symmetric;
// unit-sum shares total at most 1.
std::vector<double> allocation_rule(const GeneralContest& contest,
                                    const std::vector<double>& profile);

// Output-space clipped score g(b): zero below the reserve band, identity in
// the band, the band ceiling inside the dead zone, capped at eta(F(V_H))
// above. The prize is split equally among the maximum positive scores.
double output_space_rule(const GeneralContest& contest, double b);

// Ex-post shares computed from reported outputs: each output is mapped back
// to an ability through the equilibrium (b -> min v with beta(v) >= b) and
// the ability-space rule is applied. Off-range outputs clip to the top case.
std::vector<double> allocation_from_outputs(const GeneralContest& contest,
                                            const std::vector<double>& outputs);

}  // namespace contestopt
