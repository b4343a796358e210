// SPDX-License-Identifier: Apache-2.0
#include "varietylab/report.hpp"

namespace varietylab {

Json to_json(const LabelSet& set) {
  Json out = Json::array();
  for (const auto& label : set) out.push_back(label);
  return out;
}

Json to_json(const PerComponent<LabelSet>& sets) {
  Json out;
  out["input"] = to_json(sets.input);
  out["output"] = to_json(sets.output);
  return out;
}

Json to_json(const Interval& interval) { return Json::array({interval.from, interval.to}); }

Json to_json(const Distribution& dist) {
  Json out;
  out["elements"] = dist.elements();
  out["probabilities"] = dist.probabilities();
  out["bits"] = variety(dist);
  return out;
}

Json to_json(const Residual& residual) {
  Json out;
  out["system"] = residual.system_id;
  out["interval"] = to_json(residual.interval);
  out["residual"] = to_json(residual.parts);
  return out;
}

Json to_json(const CorePeripheryPartition& partition) {
  Json out;
  out["system"] = partition.system_id;
  out["interval"] = to_json(partition.interval);
  out["core"] = to_json(partition.core);
  out["periphery"] = to_json(partition.periphery);
  out["shed"] = to_json(partition.shed);
  return out;
}

Json to_json(const AbsorptionEvent& event) {
  Json out;
  out["intervals"] = Json::array({to_json(event.first), to_json(event.second)});
  out["absorbed"] = to_json(event.absorbed);
  return out;
}

Json to_json(const SubsystemLocation& location) {
  auto fraction = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
  Json out;
  for (Component c : kComponents) {
    Json part;
    part["in_core"] = fraction(location.in_core[c]);
    part["in_periphery"] = fraction(location.in_periphery[c]);
    out[std::string(to_string(c))] = std::move(part);
  }
  return out;
}

Json to_json(const OutcomeTable& table, const RegulatorPolicy& policy) {
  Json out;
  for (const auto& d : table.disturbances()) {
    auto it = policy.mapping.find(d);
    if (it != policy.mapping.end()) out[d] = it->second;
  }
  if (out.is_null()) out = Json::object();
  return out;
}

Json to_json(const OutcomeTable& table, const PolicySearchResult& result) {
  Json out;
  out["policy"] = to_json(table, result.policy);
  out["bits"] = result.bits;
  out["evaluated"] = result.evaluated;
  return out;
}

Json to_json(const BoundReport& report, const OutcomeTable& table) {
  Json out;
  out["table_class"] = std::string(to_string(report.table_class));
  out["disturbance_bits"] = report.disturbance_bits;
  out["response_bits"] = report.response_bits;
  out["lower_bound_bits"] = report.lower_bound_bits;
  out["achieved_min_bits"] = report.achieved_min_bits;
  out["bound_applicable"] = report.bound_applicable;
  out["bound_satisfied"] = report.bound_satisfied;
  out["optimal_policy"] = to_json(table, report.optimal_policy);
  return out;
}

Json to_json(const DominanceScore& score) {
  Json out;
  out["score"] = std::string(to_string(score.score));
  out["ordinal"] = static_cast<int>(score.score);
  out["v_core"] = score.v_core;
  out["v_periphery"] = score.v_periphery;
  out["mode"] = std::string(to_string(score.mode));
  return out;
}

Json to_json(const SymmetryCell& cell) {
  Json out;
  out["system_score"] = to_json(cell.system_score);
  out["environment_score"] = to_json(cell.environment_score);
  out["region"] = std::string(to_string(cell.region));
  return out;
}

Json to_json(const DeductionReport& report) {
  Json premises;
  premises["stable"] = report.stable;
  premises["v_env_core_inputs"] = report.v_env_core_inputs;
  premises["v_sys_core_outputs"] = report.v_sys_core_outputs;

  Json out;
  out["interval"] = to_json(report.interval);
  out["mode"] = std::string(to_string(report.mode));
  out["premises"] = std::move(premises);
  out["env_core_exogenous_inputs"] = to_json(report.env_core_exogenous_inputs);
  out["sys_core_outputs"] = to_json(report.sys_core_outputs);
  out["conclusion"] = std::string(to_string(report.conclusion));
  out["rule_trace"] = report.rule_trace;
  return out;
}

Json to_json(const StabilityAssessment& assessment) {
  Json out;
  out["stable"] = assessment.stable;
  out["outcome_bits"] = assessment.outcome_bits;
  out["threshold_bits"] = assessment.threshold_bits;
  out["observations"] = assessment.observations;
  return out;
}

Json to_json(const std::vector<MembershipState>& timeline) {
  Json out = Json::array();
  for (auto s : timeline) out.push_back(std::string(to_string(s)));
  return out;
}

}  // namespace varietylab
