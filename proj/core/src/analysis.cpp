// SPDX-License-Identifier: Apache-2.0
#include "varietylab/analysis.hpp"

#include <algorithm>

#include "varietylab/canonical_json.hpp"
#include "varietylab/error.hpp"

namespace varietylab {

std::string_view to_string(Dominance d) noexcept {
  switch (d) {
    case Dominance::core_dominant: return "core_dominant";
    case Dominance::balanced: return "balanced";
    case Dominance::periphery_dominant: return "periphery_dominant";
  }
  return "balanced";
}

std::string_view to_string(SymmetryRegion r) noexcept {
  switch (r) {
    case SymmetryRegion::system_more_peripheral: return "system_more_peripheral";
    case SymmetryRegion::symmetric: return "symmetric";
    case SymmetryRegion::system_more_core_dominant: return "system_more_core_dominant";
  }
  return "symmetric";
}

std::string_view to_string(Conclusion c) noexcept {
  return c == Conclusion::periphery_participates ? "periphery_participates" : "inconclusive";
}

namespace {

const Counts* counts_for(const SnapshotCounts* counts, Component c) {
  if (!counts || !(*counts)[c]) return nullptr;
  return &*(*counts)[c];
}

}  // namespace

DominanceScore dominance(const CorePeripheryPartition& partition, VarietyMode mode,
                         const SnapshotCounts* counts, double epsilon_balance) {
  DominanceScore s;
  s.mode = mode;
  s.v_core = component_pair_variety(partition.core.input, partition.core.output, mode,
                                    counts_for(counts, Component::input),
                                    counts_for(counts, Component::output));
  s.v_periphery = component_pair_variety(partition.periphery.input, partition.periphery.output,
                                         mode, counts_for(counts, Component::input),
                                         counts_for(counts, Component::output));
  if (s.v_periphery > s.v_core + epsilon_balance) {
    s.score = Dominance::periphery_dominant;
  } else if (s.v_core > s.v_periphery + epsilon_balance) {
    s.score = Dominance::core_dominant;
  } else {
    s.score = Dominance::balanced;
  }
  return s;
}

SymmetryCell classify_pair(const DominanceScore& system, const DominanceScore& environment) {
  if (system.mode != environment.mode) {
    throw Error("mode-mismatch", "system scored in " + std::string(to_string(system.mode)) +
                                     " mode, environment in " +
                                     std::string(to_string(environment.mode)));
  }
  SymmetryCell cell{system, environment, SymmetryRegion::symmetric};
  const int s = static_cast<int>(system.score);
  const int e = static_cast<int>(environment.score);
  if (s > e) {
    cell.region = SymmetryRegion::system_more_peripheral;
  } else if (s < e) {
    cell.region = SymmetryRegion::system_more_core_dominant;
  }
  return cell;
}

DeductionReport blocking_deduction(const CorePeripheryPartition& system,
                                   const CorePeripheryPartition& environment,
                                   const ClosedSystemPair& pair, bool stable,
                                   const DeductionOptions& options) {
  if (system.interval != environment.interval) {
    throw Error("interval-mismatch", "system and environment partitions cover different intervals");
  }
  if (system.system_id != pair.system_id || environment.system_id != pair.environment_id) {
    throw Error("pair-mismatch", "partitions do not belong to the declared pair '" +
                                     pair.system_id + "'/'" + pair.environment_id + "'");
  }

  DeductionReport r;
  r.interval = system.interval;
  r.mode = options.mode;
  r.stable = stable;
  r.sys_core_outputs = system.core.output;
  r.env_core_exogenous_inputs =
      set_difference(environment.core.input, system.later(Component::output));

  r.v_sys_core_outputs =
      component_pair_variety({}, r.sys_core_outputs, options.mode, nullptr,
                             counts_for(options.system_counts, Component::output));
  r.v_env_core_inputs =
      component_pair_variety(r.env_core_exogenous_inputs, {}, options.mode,
                             counts_for(options.environment_counts, Component::input), nullptr);

  const bool exceeds = r.v_env_core_inputs > r.v_sys_core_outputs + kDeductionTolerance;
  r.conclusion = (stable && exceeds) ? Conclusion::periphery_participates
                                     : Conclusion::inconclusive;

  r.rule_trace = "stable=" + std::string(stable ? "true" : "false") +
                 "; V(env core exogenous inputs)=" + format_number(r.v_env_core_inputs) +
                 "; V(system core outputs)=" + format_number(r.v_sys_core_outputs) + "; " +
                 (exceeds ? "env > system" : "env <= system") + " -> " +
                 std::string(to_string(r.conclusion));
  return r;
}

StabilityAssessment assess_stability(const OutcomeTable& table,
                                     const std::vector<Label>& observed_outcomes,
                                     double threshold_bits) {
  if (observed_outcomes.empty()) throw Error("no-observations", "outcome log is empty");
  const auto& known = table.outcome_labels();
  Counts counts;
  for (const auto& z : observed_outcomes) {
    if (!std::binary_search(known.begin(), known.end(), z)) {
      throw Error("unknown-outcome", "'" + z + "' is not an outcome of the table");
    }
    ++counts[z];
  }
  StabilityAssessment a;
  a.outcome_bits = variety(empirical_distribution(counts));
  a.threshold_bits = threshold_bits;
  a.observations = observed_outcomes.size();
  a.stable = a.outcome_bits <= threshold_bits;
  return a;
}

}  // namespace varietylab
