// SPDX-License-Identifier: Apache-2.0
#include "varietylab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "varietylab/error.hpp"

namespace varietylab {

std::uint64_t Rng::next_below(std::uint64_t bound) {
  // Reject the low 2^64 mod bound values so every residue is equally likely.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = engine_();
    if (x >= threshold) return x % bound;
  }
}

double Rng::next_unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::size_t Rng::pick(const std::vector<double>& weights) {
  const double u = next_unit();
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last_positive = i;
    if (u < acc) return i;
  }
  return last_positive;
}

void SimulationConfig::validate_common() const {
  if (steps < 1) throw Error("invalid-config", "steps must be at least 1");
  if (snapshot_cadence < 1) throw Error("invalid-config", "cadence must be at least 1");
  if (!(drift_rate >= 0.0 && drift_rate <= 1.0)) {
    throw Error("invalid-config", "drift rate must lie in [0, 1]");
  }
}

std::string policy_label(std::string_view disturbance, std::string_view response) {
  std::string out = "policy:";
  out.append(disturbance).append("->").append(response);
  return out;
}

namespace {

bool snapshot_due(std::uint64_t step, const SimulationConfig& config) {
  return step % config.snapshot_cadence == 0 || step == config.steps;
}

std::string dist_label(std::string_view d) { return "dist:" + std::string(d); }
std::string out_label(std::string_view z) { return "out:" + std::string(z); }
std::string resp_label(std::string_view r) { return "resp:" + std::string(r); }

/// Entropy of outcome masses when disturbance `d` answers with `r` and every
/// other learned entry keeps its current response, weighted by frequency.
double projected_bits(const OutcomeTable& table, const std::vector<std::uint64_t>& seen,
                      const std::vector<std::optional<std::size_t>>& policy, std::size_t d,
                      std::size_t r) {
  std::vector<double> mass(table.outcome_labels().size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (seen[i] == 0 || (i != d && !policy[i])) continue;
    const std::size_t response = i == d ? r : *policy[i];
    mass[table.outcome_index(i, response)] += static_cast<double>(seen[i]);
    total += static_cast<double>(seen[i]);
  }
  for (auto& m : mass) m /= total;
  return entropy_bits(mass);
}

struct Window {
  Counts dist;
  Counts out;
  std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> plays;

  void clear() {
    dist.clear();
    out.clear();
    plays.clear();
  }
};

}  // namespace

RegulatorRun simulate_adaptive_regulator(const SimulationConfig& config) {
  config.validate_common();
  if (!config.game) throw Error("invalid-config", "regulator simulation needs a game table");
  const OutcomeTable& game = *config.game;
  const std::size_t n_d = game.disturbance_count();
  const std::size_t n_r = game.response_count();

  Rng rng(config.seed);
  std::vector<std::optional<std::size_t>> policy(n_d);
  std::vector<std::uint64_t> seen(n_d, 0);
  Window window;

  RegulatorRun run;
  std::vector<SystemSnapshot> snapshots;

  auto take_snapshot = [&](std::uint64_t t) {
    SystemSnapshot sys{std::string(kRegulatorId), t, {}, {}};
    Counts sys_out_counts;
    for (std::size_t r = 0; r < n_r; ++r) {
      std::uint64_t plays = 0;
      for (const auto& [key, n] : window.plays) {
        if (key.second == r) plays += n;
      }
      sys.sets.output.insert(resp_label(game.responses()[r]));
      sys_out_counts[resp_label(game.responses()[r])] = plays;
    }
    for (std::size_t d = 0; d < n_d; ++d) {
      if (!policy[d]) continue;
      const auto label = policy_label(game.disturbances()[d], game.responses()[*policy[d]]);
      sys.sets.output.insert(label);
      auto it = window.plays.find({d, *policy[d]});
      sys_out_counts[label] = it == window.plays.end() ? 0 : it->second;
    }
    Counts sys_in_counts;
    for (const auto& [label, n] : window.dist) sys_in_counts[label] = n;
    for (const auto& [label, n] : window.out) sys_in_counts[label] = n;
    for (const auto& [label, n] : sys_in_counts) sys.sets.input.insert(label);
    sys.counts.input = std::move(sys_in_counts);
    sys.counts.output = sys_out_counts;

    SystemSnapshot env{std::string(kEnvironmentId), t, {}, {}};
    Counts env_in_counts = sys_out_counts;
    for (const auto& d : game.disturbances()) {
      auto it = window.dist.find(dist_label(d));
      env_in_counts[dist_label(d)] = it == window.dist.end() ? 0 : it->second;
    }
    for (const auto& [label, n] : env_in_counts) env.sets.input.insert(label);
    for (const auto& [label, n] : window.out) env.sets.output.insert(label);
    env.counts.input = std::move(env_in_counts);
    env.counts.output = window.out;

    snapshots.push_back(std::move(sys));
    snapshots.push_back(std::move(env));
    window.clear();
  };

  take_snapshot(0);
  const auto& weights = game.disturbance_distribution().probabilities();
  for (std::uint64_t step = 1; step <= config.steps; ++step) {
    const std::size_t d = rng.pick(weights);
    bool changed = false;
    std::size_t r;
    if (policy[d]) {
      r = *policy[d];
    } else {
      r = static_cast<std::size_t>(rng.next_below(n_r));
      changed = true;
    }
    const std::size_t z = game.outcome_index(d, r);
    run.outcomes.push_back(
        {step, game.disturbances()[d], game.responses()[r], game.outcome_labels()[z]});
    ++window.dist[dist_label(game.disturbances()[d])];
    ++window.out[out_label(game.outcome_labels()[z])];
    ++window.plays[{d, r}];
    ++seen[d];

    std::size_t best = 0;
    double best_bits = projected_bits(game, seen, policy, d, 0);
    for (std::size_t cand = 1; cand < n_r; ++cand) {
      const double h = projected_bits(game, seen, policy, d, cand);
      if (h < best_bits - 1e-12) {
        best_bits = h;
        best = cand;
      }
    }
    if (policy[d] != best) changed = true;
    policy[d] = best;
    if (changed) run.last_policy_change = step;

    if (snapshot_due(step, config)) take_snapshot(step);
  }

  for (std::size_t d = 0; d < n_d; ++d) {
    if (policy[d]) run.final_policy.mapping[game.disturbances()[d]] = game.responses()[*policy[d]];
  }
  run.trace = Trace(std::move(snapshots),
                    {{std::string(kRegulatorId), std::string(kEnvironmentId)}});
  return run;
}

Trace simulate_drift_environment(const SimulationConfig& config) {
  config.validate_common();
  if (config.alphabet_size < 2) throw Error("invalid-config", "alphabet size must be at least 2");

  Rng rng(config.seed);
  const auto replace_per_window = static_cast<std::size_t>(
      std::floor(config.drift_rate * static_cast<double>(config.alphabet_size) + 1e-9));

  std::uint64_t next_id = 0;
  LabelSet alphabet;
  while (alphabet.size() < config.alphabet_size) alphabet.insert("x" + std::to_string(next_id++));

  std::vector<SystemSnapshot> snapshots;
  snapshots.push_back({std::string(kEnvironmentId), 0, {alphabet, {}}, {}});
  for (std::uint64_t step = 1; step <= config.steps; ++step) {
    if (!snapshot_due(step, config)) continue;
    std::vector<Label> current(alphabet.begin(), alphabet.end());
    for (std::size_t i = 0; i < replace_per_window; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.next_below(current.size() - i));
      std::swap(current[i], current[j]);
      alphabet.erase(current[i]);
    }
    for (std::size_t i = 0; i < replace_per_window; ++i) {
      alphabet.insert("x" + std::to_string(next_id++));
    }
    snapshots.push_back({std::string(kEnvironmentId), step, {alphabet, {}}, {}});
  }
  return Trace(std::move(snapshots));
}

std::string serialize_outcome_log(const std::vector<OutcomeRecord>& log) {
  std::string out;
  for (const auto& rec : log) {
    nlohmann::ordered_json j;
    j["step"] = rec.step;
    j["d"] = rec.disturbance;
    j["r"] = rec.response;
    j["z"] = rec.outcome;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<OutcomeRecord> parse_outcome_log(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<OutcomeRecord> log;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    auto bad = [&](const std::string& what) {
      return Error("malformed-line", "line " + std::to_string(number) + ": " + what);
    };
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw bad(e.what());
    }
    if (!j.is_object() || !j.contains("step") || !j["step"].is_number_unsigned()) {
      throw bad("expected {\"step\": n, \"d\": ..., \"r\": ..., \"z\": ...}");
    }
    OutcomeRecord rec;
    rec.step = j["step"].get<std::uint64_t>();
    for (auto [key, field] : {std::pair{"d", &rec.disturbance}, std::pair{"r", &rec.response},
                              std::pair{"z", &rec.outcome}}) {
      if (!j.contains(key) || !j[key].is_string()) {
        throw bad(std::string("\"") + key + "\" must be a string");
      }
      *field = j[key].get<std::string>();
    }
    log.push_back(std::move(rec));
  }
  return log;
}

}  // namespace varietylab
