// SPDX-License-Identifier: Apache-2.0
#pragma once

/// Residual change, core/periphery partitions and their evolution over time.
///
/// For an interval (t, t') and each component set:
///   periphery = set(t') \ set(t)      (the residual change)
///   core      = set(t) ∩ set(t')
///   shed      = set(t) \ set(t')
/// so core ∪ periphery = set(t') and core ∪ shed = set(t).

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "varietylab/system_model.hpp"

namespace varietylab {

struct Interval {
  TimeIndex from = 0;
  TimeIndex to = 0;

  friend auto operator<=>(const Interval&, const Interval&) = default;
};

struct Residual {
  Label system_id;
  Interval interval;
  PerComponent<LabelSet> parts;
};

struct CorePeripheryPartition {
  Label system_id;
  Interval interval;
  PerComponent<LabelSet> core;
  PerComponent<LabelSet> periphery;
  PerComponent<LabelSet> shed;

  /// The component set at the later time (core ∪ periphery).
  LabelSet later(Component c) const { return set_union(core[c], periphery[c]); }
};

enum class MembershipState { core, periphery, shed, absent };

std::string_view to_string(MembershipState state) noexcept;

/// Errors: "system-mismatch"; "time-order" when the second snapshot precedes
/// the first. Equal time indices are accepted as a degenerate interval.
Residual residual(const SystemSnapshot& earlier, const SystemSnapshot& later);
CorePeripheryPartition partition(const SystemSnapshot& earlier, const SystemSnapshot& later);

/// Partition between two time indices present in the trace.
CorePeripheryPartition partition(const Trace& trace, std::string_view system_id,
                                 TimeIndex from, TimeIndex to);

/// Partitions over consecutive snapshot intervals (t_i, t_{i+1}).
std::vector<CorePeripheryPartition> consecutive_partitions(const Trace& trace,
                                                           std::string_view system_id);

/// One state per consecutive interval. Error("insufficient-snapshots") with
/// fewer than two snapshots.
std::vector<MembershipState> membership_timeline(const Trace& trace, std::string_view system_id,
                                                 std::string_view element, Component component);

struct AbsorptionEvent {
  Interval first;   // (t_i, t_{i+1}): where the elements were peripheral
  Interval second;  // (t_{i+1}, t_{i+2}): where they sit in the core
  PerComponent<LabelSet> absorbed;
};

/// Non-empty C^{t_{i+1},t_{i+2}} ∩ P^{t_i,t_{i+1}} over consecutive interval
/// pairs. Error("insufficient-snapshots") with fewer than three snapshots.
std::vector<AbsorptionEvent> absorption_events(const Trace& trace, std::string_view system_id);

struct SubsystemLocation {
  /// Fractions of the subsystem's elements lying in the parent's core and
  /// periphery; nullopt for a component where the subsystem is empty.
  PerComponent<std::optional<double>> in_core;
  PerComponent<std::optional<double>> in_periphery;
};

/// Error("not-a-subsystem") when the subsystem's sets are not contained in
/// the parent's sets at the partition's later time.
SubsystemLocation locate_subsystem(const CorePeripheryPartition& parent,
                                   const SystemSnapshot& subsystem_later);

}  // namespace varietylab
