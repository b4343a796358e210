// SPDX-License-Identifier: Apache-2.0
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "varietylab/error.hpp"
#include "varietylab/system_model.hpp"

namespace varietylab {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& code, std::size_t line, const std::string& what) {
  throw Error(code, "line " + std::to_string(line) + ": " + what);
}

std::string require_string(const json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    fail("malformed-line", line, std::string("\"") + key + "\" must be a string");
  }
  auto value = it->get<std::string>();
  if (value.empty()) fail("malformed-line", line, std::string("\"") + key + "\" is empty");
  return value;
}

void require_only_keys(const json& obj, std::initializer_list<const char*> allowed,
                       std::size_t line) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) fail("malformed-line", line, "unexpected key \"" + key + "\"");
  }
}

std::uint64_t require_count(const json& value, std::size_t line, const std::string& what) {
  if (value.is_number_unsigned()) return value.get<std::uint64_t>();
  if (value.is_number_integer() && value.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(value.get<std::int64_t>());
  }
  fail("malformed-line", line, what + " must be a non-negative integer");
}

struct PartialSnapshot {
  SystemSnapshot snapshot;
  bool seen[2] = {false, false};
};

}  // namespace

Trace parse_trace(std::istream& in) {
  std::map<std::pair<Label, TimeIndex>, PartialSnapshot> records;
  std::map<Label, TimeIndex> latest;
  std::vector<ClosedSystemPair> pairs;
  std::map<Label, Label> parents;

  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.find_first_not_of(" \t") == std::string::npos) continue;

    json obj;
    try {
      obj = json::parse(text);
    } catch (const json::parse_error& e) {
      fail("malformed-line", line, e.what());
    }
    if (!obj.is_object()) fail("malformed-line", line, "record must be a JSON object");

    if (obj.contains("pair")) {
      require_only_keys(obj, {"pair"}, line);
      const auto& body = obj["pair"];
      if (!body.is_object()) fail("malformed-line", line, "\"pair\" must be an object");
      require_only_keys(body, {"system", "environment"}, line);
      pairs.push_back({require_string(body, "system", line),
                       require_string(body, "environment", line)});
      continue;
    }
    if (obj.contains("subsystem")) {
      require_only_keys(obj, {"subsystem"}, line);
      const auto& body = obj["subsystem"];
      if (!body.is_object()) fail("malformed-line", line, "\"subsystem\" must be an object");
      require_only_keys(body, {"child", "parent"}, line);
      auto child = require_string(body, "child", line);
      auto parent = require_string(body, "parent", line);
      auto [it, inserted] = parents.emplace(child, parent);
      if (!inserted && it->second != parent) {
        fail("invalid-subsystem", line, "subsystem '" + child + "' has two parents");
      }
      continue;
    }

    require_only_keys(obj, {"t", "system", "component", "elements", "counts"}, line);
    if (!obj.contains("t")) fail("malformed-line", line, "missing \"t\"");
    const TimeIndex t = require_count(obj["t"], line, "\"t\"");
    auto system = require_string(obj, "system", line);
    Component component;
    try {
      component = parse_component(require_string(obj, "component", line));
    } catch (const Error&) {
      fail("malformed-line", line, "\"component\" must be \"input\" or \"output\"");
    }

    auto elems = obj.find("elements");
    if (elems == obj.end() || !elems->is_array()) {
      fail("malformed-line", line, "\"elements\" must be an array");
    }
    LabelSet set;
    for (const auto& e : *elems) {
      if (!e.is_string() || e.get_ref<const std::string&>().empty()) {
        fail("malformed-line", line, "elements must be non-empty strings");
      }
      if (!set.insert(e.get<std::string>()).second) {
        fail("duplicate-element", line, "element '" + e.get<std::string>() + "' repeated");
      }
    }

    std::optional<Counts> counts;
    if (auto c = obj.find("counts"); c != obj.end()) {
      if (!c->is_object()) fail("malformed-line", line, "\"counts\" must be an object");
      counts.emplace();
      for (const auto& [label, value] : c->items()) {
        if (!set.contains(label)) {
          fail("unknown-count-label", line, "count for '" + label + "' not in elements");
        }
        (*counts)[label] = require_count(value, line, "count for '" + label + "'");
      }
    }

    auto [last, fresh] = latest.emplace(system, t);
    if (!fresh) {
      if (t < last->second) {
        fail("time-order", line,
             "t=" + std::to_string(t) + " after t=" + std::to_string(last->second) +
                 " for system '" + system + "'");
      }
      last->second = t;
    }

    auto& partial = records[{system, t}];
    const auto slot = static_cast<std::size_t>(component);
    if (partial.seen[slot]) {
      fail("duplicate-snapshot", line,
           "second " + std::string(to_string(component)) + " record for system '" + system +
               "' at t=" + std::to_string(t));
    }
    partial.seen[slot] = true;
    partial.snapshot.system_id = system;
    partial.snapshot.t = t;
    partial.snapshot.sets[component] = std::move(set);
    partial.snapshot.counts[component] = std::move(counts);
  }

  std::vector<SystemSnapshot> snapshots;
  snapshots.reserve(records.size());
  for (auto& [key, partial] : records) snapshots.push_back(std::move(partial.snapshot));
  return Trace(std::move(snapshots), std::move(pairs), std::move(parents));
}

Trace parse_trace(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_trace(in);
}

std::string serialize_trace(const Trace& trace) {
  std::string out;
  auto emit = [&out](const ordered_json& record) {
    out += record.dump();
    out += '\n';
  };

  for (const auto& p : trace.pairs()) {
    ordered_json body;
    body["system"] = p.system_id;
    body["environment"] = p.environment_id;
    ordered_json record;
    record["pair"] = std::move(body);
    emit(record);
  }
  for (const auto& [child, parent] : trace.subsystem_parents()) {
    ordered_json body;
    body["child"] = child;
    body["parent"] = parent;
    ordered_json record;
    record["subsystem"] = std::move(body);
    emit(record);
  }
  for (const auto& id : trace.system_ids()) {
    for (const auto& s : trace.snapshots(id)) {
      for (Component c : kComponents) {
        ordered_json record;
        record["t"] = s.t;
        record["system"] = s.system_id;
        record["component"] = std::string(to_string(c));
        record["elements"] = ordered_json::array();
        for (const auto& label : s.sets[c]) record["elements"].push_back(label);
        if (s.counts[c]) {
          ordered_json counts = ordered_json::object();
          for (const auto& [label, n] : *s.counts[c]) counts[label] = n;
          record["counts"] = std::move(counts);
        }
        emit(record);
      }
    }
  }
  return out;
}

}  // namespace varietylab
