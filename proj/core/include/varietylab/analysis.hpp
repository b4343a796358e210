// SPDX-License-Identifier: Apache-2.0
#pragma once

/// Analyses over core/periphery partitions: core-vs-periphery dominance,
/// system/environment symmetry, blocking deduction and stability.

#include <string>
#include <string_view>
#include <vector>

#include "varietylab/core_periphery.hpp"
#include "varietylab/regulator_game.hpp"
#include "varietylab/system_model.hpp"
#include "varietylab/variety.hpp"

namespace varietylab {

inline constexpr double kDefaultBalanceEpsilon = 1e-9;
inline constexpr double kDeductionTolerance = 1e-9;

enum class Dominance : int { core_dominant = -1, balanced = 0, periphery_dominant = 1 };

std::string_view to_string(Dominance d) noexcept;

struct DominanceScore {
  Dominance score = Dominance::balanced;
  double v_core = 0.0;
  double v_periphery = 0.0;
  VarietyMode mode = VarietyMode::uniform;
};

/// Counts attached to the partition's later snapshot, per component.
using SnapshotCounts = PerComponent<std::optional<Counts>>;

/// Compares the variety of the core with the variety of the periphery, each
/// taken over the disjoint union of its input and output parts. Empirical
/// mode needs `counts` for every element (Error("missing-counts")).
DominanceScore dominance(const CorePeripheryPartition& partition, VarietyMode mode,
                         const SnapshotCounts* counts = nullptr,
                         double epsilon_balance = kDefaultBalanceEpsilon);

enum class SymmetryRegion { system_more_peripheral, symmetric, system_more_core_dominant };

std::string_view to_string(SymmetryRegion r) noexcept;

struct SymmetryCell {
  DominanceScore system_score;
  DominanceScore environment_score;
  SymmetryRegion region = SymmetryRegion::symmetric;
};

/// Places a system/environment score pair in the 3x3 symmetry table.
/// Error("mode-mismatch") when the scores use different variety modes.
SymmetryCell classify_pair(const DominanceScore& system, const DominanceScore& environment);

enum class Conclusion { periphery_participates, inconclusive };

std::string_view to_string(Conclusion c) noexcept;

struct DeductionReport {
  Interval interval;
  VarietyMode mode = VarietyMode::uniform;
  bool stable = false;
  LabelSet env_core_exogenous_inputs;
  LabelSet sys_core_outputs;
  double v_env_core_inputs = 0.0;
  double v_sys_core_outputs = 0.0;
  Conclusion conclusion = Conclusion::inconclusive;
  std::string rule_trace;
};

struct DeductionOptions {
  VarietyMode mode = VarietyMode::uniform;
  const SnapshotCounts* system_counts = nullptr;
  const SnapshotCounts* environment_counts = nullptr;
};

/// A stable regulator whose environment's exogenous-input core carries more
/// variety than its own output core must be using its periphery to absorb
/// part of that variety. Compares the output core of the system against the
/// environment's core inputs that the system did not produce.
///
/// Errors: "interval-mismatch", "pair-mismatch".
DeductionReport blocking_deduction(const CorePeripheryPartition& system,
                                   const CorePeripheryPartition& environment,
                                   const ClosedSystemPair& pair, bool stable,
                                   const DeductionOptions& options = {});

struct StabilityAssessment {
  bool stable = false;
  double outcome_bits = 0.0;
  double threshold_bits = 0.0;
  std::size_t observations = 0;
};

/// Stable iff the empirical variety of the observed outcomes is at most the
/// threshold. Errors: "no-observations", "unknown-outcome" for labels the
/// table cannot produce.
StabilityAssessment assess_stability(const OutcomeTable& table,
                                     const std::vector<Label>& observed_outcomes,
                                     double threshold_bits = 0.0);

}  // namespace varietylab
