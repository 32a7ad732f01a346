#pragma once

#include <json.hpp>

#include "contestopt/battery.hpp"
#include "contestopt/general_contest.hpp"
#include "contestopt/oracle.hpp"
#include "contestopt/rank_contest.hpp"

namespace contestopt {

nlohmann::json to_json(const SolveReport& report);
nlohmann::json to_json(const GeneralContest& contest);
nlohmann::json to_json(const oracle::OracleReport& report);
nlohmann::json to_json(const BatteryRow& row);

// Distribution spec: {"kind":"uniform"} | {"kind":"power","k":2.0} |
// {"kind":"piecewise_cdf","points":[[v,F],...]} |
// {"kind":"mixture","components":[[w, spec],...]}
AbilityDistribution distribution_from_json(const nlohmann::json& spec);
nlohmann::json distribution_to_json(const AbilityDistribution& dist);

}  // namespace contestopt
