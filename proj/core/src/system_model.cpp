// SPDX-License-Identifier: Apache-2.0
#include "varietylab/system_model.hpp"

#include <algorithm>
#include <iterator>

#include "varietylab/error.hpp"

namespace varietylab {

std::string_view to_string(Component component) noexcept {
  return component == Component::input ? "input" : "output";
}

Component parse_component(std::string_view text) {
  if (text == "input") return Component::input;
  if (text == "output") return Component::output;
  throw Error("invalid-component", "expected input or output, got '" + std::string(text) + "'");
}

LabelSet set_difference(const LabelSet& a, const LabelSet& b) {
  LabelSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

LabelSet set_intersection(const LabelSet& a, const LabelSet& b) {
  LabelSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

LabelSet set_union(const LabelSet& a, const LabelSet& b) {
  LabelSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

bool is_subset(const LabelSet& sub, const LabelSet& super) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

namespace {

std::string where(const SystemSnapshot& s) {
  return "system '" + s.system_id + "' at t=" + std::to_string(s.t);
}

void validate_snapshot(const SystemSnapshot& s) {
  if (s.system_id.empty()) throw Error("invalid-label", "empty system id");
  for (Component c : kComponents) {
    for (const auto& label : s.sets[c]) {
      if (label.empty()) throw Error("invalid-label", "empty element label in " + where(s));
    }
    if (!s.counts[c]) continue;
    for (const auto& [label, n] : *s.counts[c]) {
      if (!s.sets[c].contains(label)) {
        throw Error("unknown-count-label", "count for '" + label + "' not in " +
                                               std::string(to_string(c)) + " set of " + where(s));
      }
    }
  }
}

}  // namespace

Trace::Trace(std::vector<SystemSnapshot> snapshots, std::vector<ClosedSystemPair> pairs,
             std::map<Label, Label> subsystem_parents)
    : pairs_(std::move(pairs)), parents_(std::move(subsystem_parents)) {
  for (auto& s : snapshots) {
    validate_snapshot(s);
    auto& list = systems_[s.system_id];
    list.push_back(std::move(s));
  }
  for (auto& [id, list] : systems_) {
    std::stable_sort(list.begin(), list.end(),
                     [](const SystemSnapshot& a, const SystemSnapshot& b) { return a.t < b.t; });
    for (std::size_t i = 1; i < list.size(); ++i) {
      if (list[i].t == list[i - 1].t) {
        throw Error("time-order", "repeated time index for " + where(list[i]));
      }
    }
  }

  std::sort(pairs_.begin(), pairs_.end());
  pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
  for (const auto& p : pairs_) {
    if (p.system_id.empty() || p.environment_id.empty() || p.system_id == p.environment_id) {
      throw Error("invalid-pair", "pair needs two distinct non-empty ids");
    }
    auto sys = systems_.find(p.system_id);
    if (sys == systems_.end()) continue;
    for (const auto& s : sys->second) {
      const SystemSnapshot* env = find(p.environment_id, s.t);
      if (env && !is_subset(s.sets.output, env->sets.input)) {
        throw Error("pair-coupling", "outputs of " + where(s) + " are not all inputs of '" +
                                         p.environment_id + "'");
      }
    }
  }

  for (const auto& [child, parent] : parents_) {
    if (child.empty() || parent.empty() || child == parent) {
      throw Error("invalid-subsystem", "subsystem link needs two distinct non-empty ids");
    }
    auto sub = systems_.find(child);
    if (sub == systems_.end()) continue;
    for (const auto& s : sub->second) {
      const SystemSnapshot* p = find(parent, s.t);
      if (!p) continue;
      for (Component c : kComponents) {
        if (!is_subset(s.sets[c], p->sets[c])) {
          throw Error("subsystem-containment", std::string(to_string(c)) + " set of " +
                                                   where(s) + " is not within parent '" +
                                                   parent + "'");
        }
      }
    }
  }
}

std::vector<Label> Trace::system_ids() const {
  std::vector<Label> ids;
  ids.reserve(systems_.size());
  for (const auto& [id, list] : systems_) ids.push_back(id);
  return ids;
}

bool Trace::has_system(std::string_view system_id) const {
  return systems_.find(system_id) != systems_.end();
}

const std::vector<SystemSnapshot>& Trace::snapshots(std::string_view system_id) const {
  auto it = systems_.find(system_id);
  if (it == systems_.end()) {
    throw Error("unknown-system", "no snapshots for system '" + std::string(system_id) + "'");
  }
  return it->second;
}

const SystemSnapshot* Trace::find(std::string_view system_id, TimeIndex t) const {
  auto it = systems_.find(system_id);
  if (it == systems_.end()) return nullptr;
  const auto& list = it->second;
  auto pos = std::lower_bound(list.begin(), list.end(), t,
                              [](const SystemSnapshot& s, TimeIndex v) { return s.t < v; });
  return (pos != list.end() && pos->t == t) ? &*pos : nullptr;
}

const SystemSnapshot& Trace::at(std::string_view system_id, TimeIndex t) const {
  const SystemSnapshot* s = find(system_id, t);
  if (!s) {
    throw Error("missing-snapshot", "system '" + std::string(system_id) +
                                        "' has no snapshot at t=" + std::to_string(t));
  }
  return *s;
}

const ClosedSystemPair& Trace::pair(std::optional<std::string_view> system_id) const {
  const ClosedSystemPair* match = nullptr;
  for (const auto& p : pairs_) {
    if (system_id && p.system_id != *system_id) continue;
    if (match) throw Error("ambiguous-pair", "more than one system/environment pair matches");
    match = &p;
  }
  if (!match) throw Error("missing-pair", "no matching system/environment pair declared");
  return *match;
}

LabelSet environment_exogenous_inputs(const Trace& trace, const ClosedSystemPair& pair,
                                      TimeIndex t) {
  const auto& env = trace.at(pair.environment_id, t);
  const auto& sys = trace.at(pair.system_id, t);
  return set_difference(env.sets.input, sys.sets.output);
}

Trace project_subsystem(const Trace& trace, std::string_view subsystem_id) {
  const bool declared = trace.subsystem_parents().contains(std::string(subsystem_id));
  if (!declared && !trace.has_system(subsystem_id)) {
    throw Error("unknown-system", "'" + std::string(subsystem_id) + "' is not in the trace");
  }
  if (!trace.has_system(subsystem_id)) return Trace{};
  return Trace(trace.snapshots(subsystem_id));
}

}  // namespace varietylab
