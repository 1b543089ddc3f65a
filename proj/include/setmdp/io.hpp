#pragma once

#include "setmdp/nonstationary.hpp"
#include "setmdp/robust.hpp"
#include "setmdp/set_ops.hpp"
#include "setmdp/windfield.hpp"

#include <json.hpp>

#include <string>

namespace setmdp::io {

using Json = nlohmann::ordered_json;

/// `%.17g`; enough digits to round-trip any double.
std::string format_double(double x);

Json to_json(const VectorXd& v);
Json to_json(const MatrixXd& m);

Json mdp_to_json(const Mdp& m);
Mdp mdp_from_json(const Json& j);

Json param_set_to_json(const ParamSet& ps);
/// Accepts every ParamSet kind, and a plain MDP document as a one-element finite set.
ParamSet param_set_from_json(const Json& j);

/// Parses text, mapping syntax errors to ValidationError("json").
Json parse(const std::string& text);

Json probe_to_json(const ContainmentProbeReport& report);
Json envelope_to_json(const EnvelopeReport& report, bool include_trace = false);
/// Columns: k, lower_0..lower_{S-1}, upper_0..upper_{S-1}, residual.
std::string envelope_trace_csv(const EnvelopeReport& report);

Json robust_solution_to_json(const RobustSolution& solution);
Json ordering_to_json(const OrderingReport& report, Index coordinate);
/// Table-I style rows: set, max (upper at coordinate), min (lower at coordinate).
std::string ordering_table_csv(const OrderingReport& report, Index coordinate);

/// Columns: seed, k, coordinate, value, box_lower, box_upper.
std::string trajectories_csv(const MultiSeedStats& stats);
Json trajectories_summary_json(const MultiSeedStats& stats);

/// Columns: deployment, k, mean, stdev, min, max, box_lower, box_upper (at the tracked coordinate).
std::string deployments_csv(const DeploymentComparison& cmp);
Json deployments_json(const DeploymentComparison& cmp);

/// The scenario's ParamSet document plus a `meta` block (ignored on load).
Json scenario_to_json(const WindScenario& scenario);

} // namespace setmdp::io
