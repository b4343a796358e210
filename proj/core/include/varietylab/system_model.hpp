// SPDX-License-Identifier: Apache-2.0
#pragma once

/// Time-indexed systems described by their input and output component sets.
///
/// A system is only ever observed through snapshots of its component sets;
/// which input maps to which output is not modeled. Elements are opaque labels
/// and identity across time is exact label equality.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "varietylab/variety.hpp"

namespace varietylab {

using TimeIndex = std::uint64_t;

enum class Component { input, output };

inline constexpr Component kComponents[] = {Component::input, Component::output};

std::string_view to_string(Component component) noexcept;
/// Throws Error("invalid-component").
Component parse_component(std::string_view text);

/// One value per component set.
template <typename T>
struct PerComponent {
  T input{};
  T output{};

  T& operator[](Component c) noexcept { return c == Component::input ? input : output; }
  const T& operator[](Component c) const noexcept {
    return c == Component::input ? input : output;
  }

  friend bool operator==(const PerComponent&, const PerComponent&) = default;
};

struct SystemSnapshot {
  Label system_id;
  TimeIndex t = 0;
  PerComponent<LabelSet> sets;
  /// Optional per-component observation counts; keys are a subset of `sets`.
  PerComponent<std::optional<Counts>> counts;

  friend bool operator==(const SystemSnapshot&, const SystemSnapshot&) = default;
};

/// A system S and its environment S_E, coupled so that S's outputs feed the
/// environment's inputs (and the environment's outputs may feed back).
struct ClosedSystemPair {
  Label system_id;
  Label environment_id;

  friend auto operator<=>(const ClosedSystemPair&, const ClosedSystemPair&) = default;
};

/// An ordered, validated collection of snapshots grouped by system.
///
/// Invariants (checked on construction, Error thrown on violation):
///   * labels are non-empty ("invalid-label")
///   * per system, time indices strictly increase ("time-order")
///   * counts keys appear in the matching component set ("unknown-count-label")
///   * a subsystem's sets at t are subsets of its parent's sets at t whenever
///     the parent has a snapshot at t ("subsystem-containment")
///   * for every declared pair and shared t, Y^t of the system is a subset of
///     the environment's X^t ("pair-coupling")
class Trace {
 public:
  Trace() = default;
  Trace(std::vector<SystemSnapshot> snapshots, std::vector<ClosedSystemPair> pairs = {},
        std::map<Label, Label> subsystem_parents = {});

  bool empty() const noexcept { return systems_.empty(); }
  std::vector<Label> system_ids() const;
  bool has_system(std::string_view system_id) const;

  /// Snapshots of one system ordered by t. Throws Error("unknown-system").
  const std::vector<SystemSnapshot>& snapshots(std::string_view system_id) const;
  /// nullptr when the system has no snapshot at t.
  const SystemSnapshot* find(std::string_view system_id, TimeIndex t) const;
  /// Throws Error("missing-snapshot").
  const SystemSnapshot& at(std::string_view system_id, TimeIndex t) const;

  const std::vector<ClosedSystemPair>& pairs() const noexcept { return pairs_; }
  /// child id -> parent id
  const std::map<Label, Label>& subsystem_parents() const noexcept { return parents_; }

  /// The single declared pair, or the one matching `system_id` when given.
  /// Throws Error("missing-pair") or Error("ambiguous-pair").
  const ClosedSystemPair& pair(std::optional<std::string_view> system_id = std::nullopt) const;

  friend bool operator==(const Trace&, const Trace&) = default;

 private:
  std::map<Label, std::vector<SystemSnapshot>, std::less<>> systems_;
  std::vector<ClosedSystemPair> pairs_;
  std::map<Label, Label> parents_;
};

/// Parses the JSON Lines trace format. Blank lines are skipped.
///
/// Errors: "malformed-line" (with line number), "duplicate-element",
/// "duplicate-snapshot", "time-order", plus the Trace invariants.
Trace parse_trace(std::istream& in);
Trace parse_trace(std::string_view text);

/// Canonical serialization: header records first (pairs, then subsystem
/// links), then one input and one output record per snapshot ordered by
/// (system, t); elements and count keys sorted; LF line endings.
std::string serialize_trace(const Trace& trace);

/// X_E^t minus Y^t of the regulating system: the environment inputs the
/// system did not produce. Throws Error("missing-snapshot").
LabelSet environment_exogenous_inputs(const Trace& trace, const ClosedSystemPair& pair,
                                      TimeIndex t);

/// The subsystem's own snapshots as a standalone trace.
/// Throws Error("unknown-system") when the id is neither a declared
/// subsystem nor a system with snapshots.
Trace project_subsystem(const Trace& trace, std::string_view subsystem_id);

LabelSet set_difference(const LabelSet& a, const LabelSet& b);
LabelSet set_intersection(const LabelSet& a, const LabelSet& b);
LabelSet set_union(const LabelSet& a, const LabelSet& b);
bool is_subset(const LabelSet& sub, const LabelSet& super);

}  // namespace varietylab
