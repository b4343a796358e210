// SPDX-License-Identifier: Apache-2.0
#pragma once

/// Deterministic simulators producing traces for the analyses.
///
/// Randomness comes from std::mt19937_64 (the 64-bit Mersenne Twister, whose
/// 10000th output from the default seed is fixed by the C++ standard at
/// 9981545732273789042). Bounded integers and unit doubles are derived from
/// its raw output here rather than through <random> distributions, whose
/// algorithms are implementation-defined.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "varietylab/regulator_game.hpp"
#include "varietylab/system_model.hpp"

namespace varietylab {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, bound) by rejection sampling; bound must be positive.
  std::uint64_t next_below(std::uint64_t bound);
  /// Uniform in [0, 1) with 53 random bits.
  double next_unit();
  /// Index drawn from `weights` (which sum to one).
  std::size_t pick(const std::vector<double>& weights);

 private:
  std::mt19937_64 engine_;
};

struct SimulationConfig {
  std::uint64_t seed = 0;
  std::uint64_t steps = 1;
  std::uint64_t snapshot_cadence = 1;
  std::optional<OutcomeTable> game;  // regulator simulation
  double drift_rate = 0.0;           // drift simulation
  std::size_t alphabet_size = 2;     // drift simulation

  /// Throws Error("invalid-config").
  void validate_common() const;
};

inline constexpr std::string_view kRegulatorId = "regulator";
inline constexpr std::string_view kEnvironmentId = "environment";

struct OutcomeRecord {
  std::uint64_t step = 0;
  Label disturbance;
  Label response;
  Label outcome;

  friend bool operator==(const OutcomeRecord&, const OutcomeRecord&) = default;
};

struct RegulatorRun {
  Trace trace;
  std::vector<OutcomeRecord> outcomes;
  /// Last step that played an unlearned entry or changed the policy;
  /// 0 when no step did.
  std::uint64_t last_policy_change = 0;
  RegulatorPolicy final_policy;  // learned entries only
};

/// Label used for a learned policy entry.
std::string policy_label(std::string_view disturbance, std::string_view response);

/// Adaptive regulator playing the configured game.
///
/// Each step draws a disturbance, plays the learned response (or a seeded
/// random response when the entry is unlearned) and then re-learns that
/// entry as the response minimizing the outcome variety projected from the
/// disturbance frequencies seen so far and the other learned entries. The
/// learner knows the game's outcome map; only disturbance frequencies are
/// learned. Snapshots are taken at t=0, every `snapshot_cadence` steps and
/// after the final step.
///
/// System "regulator": outputs are "policy:<d>-><r>" for learned entries
/// plus "resp:<r>" for every response; inputs are "dist:<d>" and "out:<z>"
/// observed in the preceding window. System "environment": inputs are
/// "dist:<d>" for the whole disturbance alphabet plus the regulator's
/// outputs; outputs are "out:<z>" observed in the preceding window.
RegulatorRun simulate_adaptive_regulator(const SimulationConfig& config);

/// Environment whose input alphabet "x<k>" replaces floor(drift_rate *
/// alphabet_size) labels at every snapshot after the first.
Trace simulate_drift_environment(const SimulationConfig& config);

std::string serialize_outcome_log(const std::vector<OutcomeRecord>& log);
/// Errors: "malformed-line".
std::vector<OutcomeRecord> parse_outcome_log(std::string_view text);

}  // namespace varietylab
