#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "diamond/capacity.hpp"
#include "diamond/queueing.hpp"
#include "diamond/sim_engine.hpp"
#include "diamond/threshold_planner.hpp"

namespace diamond {

using json = nlohmann::json;

// Round to 6 significant digits; non-finite values map to null in JSON.
double sig6(double x);
json num(double x);
std::string fmt6(double x);

json to_json(const Thresholds& t);
Thresholds thresholds_from_json(const json& j);
json to_json(const IntervalMoments& m);
json to_json(const PlanEntry& e);
json to_json(const SimConfig& c);
SimConfig sim_config_from_json(const json& j);
json to_json(const SimReport& r, bool with_replications = true);

void write_plan_csv(std::ostream& os, const std::vector<PlanEntry>& gamma);
// Long format: one row per (config, replication, variable) plus aggregate rows.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace diamond
