// SPDX-License-Identifier: Apache-2.0
#include "varietylab/core_periphery.hpp"

#include "varietylab/error.hpp"

namespace varietylab {

std::string_view to_string(MembershipState state) noexcept {
  switch (state) {
    case MembershipState::core: return "core";
    case MembershipState::periphery: return "periphery";
    case MembershipState::shed: return "shed";
    case MembershipState::absent: return "absent";
  }
  return "absent";
}

namespace {

void check_interval(const SystemSnapshot& earlier, const SystemSnapshot& later) {
  if (earlier.system_id != later.system_id) {
    throw Error("system-mismatch",
                "'" + earlier.system_id + "' vs '" + later.system_id + "'");
  }
  if (later.t < earlier.t) {
    throw Error("time-order", "interval (" + std::to_string(earlier.t) + ", " +
                                  std::to_string(later.t) + ") runs backwards");
  }
}

const std::vector<SystemSnapshot>& require_snapshots(const Trace& trace,
                                                     std::string_view system_id,
                                                     std::size_t minimum) {
  const auto& list = trace.snapshots(system_id);
  if (list.size() < minimum) {
    throw Error("insufficient-snapshots", "system '" + std::string(system_id) + "' has " +
                                              std::to_string(list.size()) + " snapshot(s), need " +
                                              std::to_string(minimum));
  }
  return list;
}

}  // namespace

Residual residual(const SystemSnapshot& earlier, const SystemSnapshot& later) {
  check_interval(earlier, later);
  Residual r{earlier.system_id, {earlier.t, later.t}, {}};
  for (Component c : kComponents) r.parts[c] = set_difference(later.sets[c], earlier.sets[c]);
  return r;
}

CorePeripheryPartition partition(const SystemSnapshot& earlier, const SystemSnapshot& later) {
  Residual r = residual(earlier, later);
  CorePeripheryPartition p{earlier.system_id, r.interval, {}, std::move(r.parts), {}};
  for (Component c : kComponents) {
    p.core[c] = set_intersection(earlier.sets[c], later.sets[c]);
    p.shed[c] = set_difference(earlier.sets[c], later.sets[c]);
  }
  return p;
}

CorePeripheryPartition partition(const Trace& trace, std::string_view system_id,
                                 TimeIndex from, TimeIndex to) {
  if (to < from) {
    throw Error("time-order", "interval (" + std::to_string(from) + ", " + std::to_string(to) +
                                  ") runs backwards");
  }
  return partition(trace.at(system_id, from), trace.at(system_id, to));
}

std::vector<CorePeripheryPartition> consecutive_partitions(const Trace& trace,
                                                           std::string_view system_id) {
  const auto& list = trace.snapshots(system_id);
  std::vector<CorePeripheryPartition> out;
  for (std::size_t i = 1; i < list.size(); ++i) out.push_back(partition(list[i - 1], list[i]));
  return out;
}

std::vector<MembershipState> membership_timeline(const Trace& trace, std::string_view system_id,
                                                 std::string_view element, Component component) {
  const auto& list = require_snapshots(trace, system_id, 2);
  const std::string label(element);
  std::vector<MembershipState> states;
  states.reserve(list.size() - 1);
  for (std::size_t i = 1; i < list.size(); ++i) {
    const bool before = list[i - 1].sets[component].contains(label);
    const bool after = list[i].sets[component].contains(label);
    if (before && after) {
      states.push_back(MembershipState::core);
    } else if (after) {
      states.push_back(MembershipState::periphery);
    } else if (before) {
      states.push_back(MembershipState::shed);
    } else {
      states.push_back(MembershipState::absent);
    }
  }
  return states;
}

std::vector<AbsorptionEvent> absorption_events(const Trace& trace, std::string_view system_id) {
  require_snapshots(trace, system_id, 3);
  const auto parts = consecutive_partitions(trace, system_id);
  std::vector<AbsorptionEvent> events;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    AbsorptionEvent e{parts[i - 1].interval, parts[i].interval, {}};
    bool any = false;
    for (Component c : kComponents) {
      e.absorbed[c] = set_intersection(parts[i].core[c], parts[i - 1].periphery[c]);
      any = any || !e.absorbed[c].empty();
    }
    if (any) events.push_back(std::move(e));
  }
  return events;
}

SubsystemLocation locate_subsystem(const CorePeripheryPartition& parent,
                                   const SystemSnapshot& subsystem_later) {
  SubsystemLocation loc;
  for (Component c : kComponents) {
    const auto& sub = subsystem_later.sets[c];
    std::size_t in_core = 0;
    std::size_t in_periphery = 0;
    for (const auto& label : sub) {
      if (parent.core[c].contains(label)) {
        ++in_core;
      } else if (parent.periphery[c].contains(label)) {
        ++in_periphery;
      } else {
        throw Error("not-a-subsystem", "'" + label + "' of '" + subsystem_later.system_id +
                                           "' is not a " + std::string(to_string(c)) +
                                           " element of '" + parent.system_id + "' at t=" +
                                           std::to_string(parent.interval.to));
      }
    }
    if (sub.empty()) continue;
    const double n = static_cast<double>(sub.size());
    loc.in_core[c] = static_cast<double>(in_core) / n;
    loc.in_periphery[c] = static_cast<double>(in_periphery) / n;
  }
  return loc;
}

}  // namespace varietylab
