// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "varietylab/analysis.hpp"
#include "varietylab/canonical_json.hpp"
#include "varietylab/core_periphery.hpp"
#include "varietylab/error.hpp"
#include "varietylab/harness.hpp"
#include "varietylab/regulator_game.hpp"
#include "varietylab/report.hpp"
#include "varietylab/system_model.hpp"
#include "varietylab/variety.hpp"

namespace varietylab::cli {

namespace {

constexpr const char* kVersion = VARIETYLAB_VERSION;
constexpr const char* kBudgetEnv = "VARIETYLAB_BUDGET";

/// Everything that identifies a run: command, resolved flags, input digests.
struct RunManifest {
  std::string command;
  Json flags = Json::object();
  Json inputs = Json::array();
  std::optional<std::uint64_t> seed;

  Json to_json() const {
    Json out;
    out["command"] = command;
    std::map<std::string, Json> sorted;
    for (const auto& [key, value] : flags.items()) sorted.emplace(key, value);
    Json ordered = Json::object();
    for (auto& [key, value] : sorted) ordered[key] = value;
    out["flags"] = std::move(ordered);
    out["inputs"] = inputs;
    out["version"] = kVersion;
    out["seed"] = seed ? Json(*seed) : Json(nullptr);
    return out;
  }
};

struct Options {
  bool pretty = false;
  std::string trace;
  std::string table;
  std::string outcomes;
  std::string system;
  std::string environment;
  std::string subsystem;
  std::string element;
  std::string component;
  std::string out_path;
  std::string outcomes_out;
  std::string counts;
  std::string labels;
  std::string file;
  std::string mode = "uniform";
  std::string method = "brute";
  std::uint64_t from = 0;
  std::uint64_t to = 0;
  double epsilon = kDefaultBalanceEpsilon;
  double threshold = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t steps = 1;
  std::uint64_t cadence = 1;
  double drift_rate = 0.0;
  std::size_t alphabet = 2;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io-error", "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("io-error", "cannot write '" + path + "'");
  out << bytes;
  if (!out) throw Error("io-error", "failed writing '" + path + "'");
}

/// Reads an input file and records its digest in the manifest.
std::string load_input(RunManifest& manifest, const std::string& role, const std::string& path) {
  std::string bytes = read_file(path);
  Json entry;
  entry["role"] = role;
  entry["path"] = path;
  entry["sha256"] = sha256_hex(bytes);
  manifest.inputs.push_back(std::move(entry));
  return bytes;
}

std::uint64_t search_budget() {
  const char* raw = std::getenv(kBudgetEnv);
  if (!raw || !*raw) return kDefaultSearchBudget;
  std::string text(raw);
  if (text.find_first_not_of("0123456789") != std::string::npos) {
    throw Error("invalid-budget", std::string(kBudgetEnv) + " must be a positive integer");
  }
  try {
    const auto value = std::stoull(text);
    if (value == 0) throw Error("invalid-budget", std::string(kBudgetEnv) + " must be positive");
    return value;
  } catch (const std::out_of_range&) {
    throw Error("invalid-budget", std::string(kBudgetEnv) + " is out of range");
  }
}

Counts parse_inline_counts(const std::string& text) {
  Counts counts;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == item.size()) {
      throw Error("invalid-counts", "expected label=count, got '" + item + "'");
    }
    const auto label = item.substr(0, eq);
    const auto value = item.substr(eq + 1);
    if (value.find_first_not_of("0123456789") != std::string::npos) {
      throw Error("invalid-counts", "count for '" + label + "' is not a non-negative integer");
    }
    if (!counts.emplace(label, std::stoull(value)).second) {
      throw Error("invalid-counts", "label '" + label + "' repeated");
    }
  }
  if (counts.empty()) throw Error("empty-support", "no counts given");
  return counts;
}

LabelSet parse_inline_labels(const std::string& text) {
  LabelSet labels;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) throw Error("invalid-label", "empty label in list");
    if (!labels.insert(item).second) {
      throw Error("duplicate-element", "label '" + item + "' repeated");
    }
  }
  return labels;
}

Json run_variety(const Options& o, RunManifest& m) {
  const VarietyMode mode = parse_variety_mode(o.mode);
  m.flags["counts"] = o.counts;
  m.flags["file"] = o.file;
  m.flags["labels"] = o.labels;
  m.flags["mode"] = o.mode;

  const int sources = !o.counts.empty() + !o.labels.empty() + !o.file.empty();
  if (sources != 1) {
    throw Error("invalid-input", "give exactly one of --counts, --labels, --file");
  }

  std::optional<Counts> counts;
  LabelSet labels;
  if (!o.counts.empty()) {
    counts = parse_inline_counts(o.counts);
  } else if (!o.labels.empty()) {
    labels = parse_inline_labels(o.labels);
  } else {
    const auto text = load_input(m, "counts", o.file);
    Json doc;
    try {
      doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw Error("invalid-counts", e.what());
    }
    if (doc.is_object()) {
      counts.emplace();
      for (const auto& [label, value] : doc.items()) {
        if (!value.is_number_unsigned()) {
          throw Error("invalid-counts", "count for '" + label + "' is not a non-negative integer");
        }
        (*counts)[label] = value.get<std::uint64_t>();
      }
    } else if (doc.is_array()) {
      for (const auto& v : doc) {
        if (!v.is_string()) throw Error("invalid-label", "labels must be strings");
        if (!labels.insert(v.get<std::string>()).second) {
          throw Error("duplicate-element", "label '" + v.get<std::string>() + "' repeated");
        }
      }
    } else {
      throw Error("invalid-counts", "expected an object of counts or an array of labels");
    }
  }
  if (counts) {
    for (const auto& [label, n] : *counts) labels.insert(label);
  }

  Json result;
  result["mode"] = o.mode;
  if (mode == VarietyMode::uniform) {
    result["elements"] = labels.size();
    result["bits"] = uniform_variety(labels);
  } else {
    if (!counts) throw Error("missing-counts", "empirical mode needs counts");
    const auto dist = empirical_distribution(*counts);
    result["elements"] = dist.size();
    result["bits"] = variety(dist);
    result["distribution"] = to_json(dist);
  }
  return result;
}

Trace load_trace(const Options& o, RunManifest& m) {
  return parse_trace(std::string_view(load_input(m, "trace", o.trace)));
}

OutcomeTable load_table(const Options& o, RunManifest& m) {
  return parse_outcome_table(load_input(m, "table", o.table));
}

Json run_partition(const Options& o, RunManifest& m) {
  m.flags["from"] = o.from;
  m.flags["system"] = o.system;
  m.flags["to"] = o.to;
  m.flags["trace"] = o.trace;
  const auto trace = load_trace(o, m);
  return to_json(partition(trace, o.system, o.from, o.to));
}

Json run_dynamics(const Options& o, RunManifest& m) {
  m.flags["component"] = o.component;
  m.flags["element"] = o.element;
  m.flags["system"] = o.system;
  m.flags["trace"] = o.trace;
  const auto trace = load_trace(o, m);
  const auto& snaps = trace.snapshots(o.system);

  Json result;
  result["system"] = o.system;
  Json times = Json::array();
  for (const auto& s : snaps) times.push_back(s.t);
  result["times"] = std::move(times);

  std::vector<Component> components;
  if (o.component.empty()) {
    components.assign(std::begin(kComponents), std::end(kComponents));
  } else {
    components.push_back(parse_component(o.component));
  }

  Json timelines;
  for (Component c : components) {
    LabelSet universe;
    if (!o.element.empty()) {
      universe.insert(o.element);
    } else {
      for (const auto& s : snaps) universe.insert(s.sets[c].begin(), s.sets[c].end());
    }
    Json per_element = Json::object();
    for (const auto& label : universe) {
      per_element[label] = to_json(membership_timeline(trace, o.system, label, c));
    }
    timelines[std::string(to_string(c))] = std::move(per_element);
  }
  result["timelines"] = std::move(timelines);

  Json events = Json::array();
  for (const auto& e : absorption_events(trace, o.system)) events.push_back(to_json(e));
  result["absorption_events"] = std::move(events);
  return result;
}

const ClosedSystemPair& resolve_pair(const Trace& trace, const Options& o,
                                     ClosedSystemPair& scratch) {
  if (!o.system.empty() && !o.environment.empty()) {
    scratch = {o.system, o.environment};
    return scratch;
  }
  if (!o.environment.empty()) {
    throw Error("missing-pair", "--environment needs --system");
  }
  return o.system.empty() ? trace.pair() : trace.pair(std::string_view(o.system));
}

Json run_classify(const Options& o, RunManifest& m) {
  const VarietyMode mode = parse_variety_mode(o.mode);
  m.flags["environment"] = o.environment;
  m.flags["epsilon"] = o.epsilon;
  m.flags["from"] = o.from;
  m.flags["mode"] = o.mode;
  m.flags["system"] = o.system;
  m.flags["to"] = o.to;
  m.flags["trace"] = o.trace;
  const auto trace = load_trace(o, m);
  ClosedSystemPair scratch;
  const auto& pair = resolve_pair(trace, o, scratch);

  auto score = [&](const std::string& id) {
    const auto p = partition(trace, id, o.from, o.to);
    const auto& counts = trace.at(id, o.to).counts;
    return dominance(p, mode, &counts, o.epsilon);
  };
  Json result;
  result["system"] = pair.system_id;
  result["environment"] = pair.environment_id;
  result["interval"] = to_json(Interval{o.from, o.to});
  result["cell"] = to_json(classify_pair(score(pair.system_id), score(pair.environment_id)));
  return result;
}

Json run_lrv_verify(const Options& o, RunManifest& m) {
  SearchOptions search;
  search.budget = search_budget();
  m.flags["budget"] = search.budget;
  m.flags["table"] = o.table;
  const auto table = load_table(o, m);
  return to_json(verify_bound(table, search), table);
}

Json run_regulator_synth(const Options& o, RunManifest& m) {
  SearchOptions search;
  search.budget = search_budget();
  m.flags["budget"] = search.budget;
  m.flags["method"] = o.method;
  m.flags["table"] = o.table;
  const auto table = load_table(o, m);
  const auto result = o.method == "greedy" ? greedy_policy(table)
                                           : min_outcome_variety_bruteforce(table, search);
  Json out;
  out["method"] = o.method;
  out["lower_bound_bits"] = lrv_lower_bound(table);
  const Json found = to_json(table, result);
  for (const auto& [key, value] : found.items()) out[key] = value;
  return out;
}

Json run_deduce(const Options& o, RunManifest& m) {
  const VarietyMode mode = parse_variety_mode(o.mode);
  m.flags["environment"] = o.environment;
  m.flags["from"] = o.from;
  m.flags["mode"] = o.mode;
  m.flags["outcomes"] = o.outcomes;
  m.flags["system"] = o.system;
  m.flags["table"] = o.table;
  m.flags["threshold"] = o.threshold;
  m.flags["to"] = o.to;
  m.flags["trace"] = o.trace;
  const auto trace = load_trace(o, m);
  const auto table = load_table(o, m);
  const auto log = parse_outcome_log(load_input(m, "outcomes", o.outcomes));

  std::vector<Label> observed;
  for (const auto& rec : log) {
    if (rec.step > o.from && rec.step <= o.to) observed.push_back(rec.outcome);
  }
  const auto stability = assess_stability(table, observed, o.threshold);

  ClosedSystemPair scratch;
  const auto& pair = resolve_pair(trace, o, scratch);
  const auto sys = partition(trace, pair.system_id, o.from, o.to);
  const auto env = partition(trace, pair.environment_id, o.from, o.to);
  DeductionOptions options;
  options.mode = mode;
  options.system_counts = &trace.at(pair.system_id, o.to).counts;
  options.environment_counts = &trace.at(pair.environment_id, o.to).counts;

  Json result;
  result["system"] = pair.system_id;
  result["environment"] = pair.environment_id;
  result["stability"] = to_json(stability);
  result["deduction"] = to_json(blocking_deduction(sys, env, pair, stability.stable, options));
  return result;
}

Json run_locate(const Options& o, RunManifest& m) {
  m.flags["from"] = o.from;
  m.flags["subsystem"] = o.subsystem;
  m.flags["system"] = o.system;
  m.flags["to"] = o.to;
  m.flags["trace"] = o.trace;
  const auto trace = load_trace(o, m);
  const auto parent = partition(trace, o.system, o.from, o.to);
  const auto sub = project_subsystem(trace, o.subsystem);
  Json result;
  result["system"] = o.system;
  result["subsystem"] = o.subsystem;
  result["interval"] = to_json(parent.interval);
  result["location"] = to_json(locate_subsystem(parent, sub.at(o.subsystem, o.to)));
  return result;
}

Json run_simulate_regulator(const Options& o, RunManifest& m) {
  m.flags["cadence"] = o.cadence;
  m.flags["out"] = o.out_path;
  m.flags["outcomes"] = o.outcomes_out;
  m.flags["steps"] = o.steps;
  m.flags["table"] = o.table;
  m.seed = o.seed;

  SimulationConfig config;
  config.seed = o.seed;
  config.steps = o.steps;
  config.snapshot_cadence = o.cadence;
  config.game = load_table(o, m);
  const auto run = simulate_adaptive_regulator(config);

  const auto trace_bytes = serialize_trace(run.trace);
  write_file(o.out_path, trace_bytes);
  Json result;
  result["trace"] = o.out_path;
  result["trace_sha256"] = sha256_hex(trace_bytes);
  result["snapshots"] = run.trace.snapshots(kRegulatorId).size();
  if (!o.outcomes_out.empty()) {
    const auto log_bytes = serialize_outcome_log(run.outcomes);
    write_file(o.outcomes_out, log_bytes);
    result["outcomes"] = o.outcomes_out;
    result["outcomes_sha256"] = sha256_hex(log_bytes);
  }
  result["last_policy_change"] = run.last_policy_change;
  result["final_policy"] = to_json(*config.game, run.final_policy);
  return result;
}

Json run_simulate_drift(const Options& o, RunManifest& m) {
  m.flags["alphabet"] = o.alphabet;
  m.flags["cadence"] = o.cadence;
  m.flags["drift_rate"] = o.drift_rate;
  m.flags["out"] = o.out_path;
  m.flags["steps"] = o.steps;
  m.seed = o.seed;

  SimulationConfig config;
  config.seed = o.seed;
  config.steps = o.steps;
  config.snapshot_cadence = o.cadence;
  config.drift_rate = o.drift_rate;
  config.alphabet_size = o.alphabet;
  const auto trace = simulate_drift_environment(config);

  const auto bytes = serialize_trace(trace);
  write_file(o.out_path, bytes);
  Json result;
  result["trace"] = o.out_path;
  result["trace_sha256"] = sha256_hex(bytes);
  result["snapshots"] = trace.snapshots(kEnvironmentId).size();
  return result;
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr);
  std::ostringstream hex;
  for (unsigned int i = 0; i < length; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return hex.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Requisite variety and core/periphery analysis", "varietylab"};
  app.require_subcommand(1);
  app.add_flag("--pretty", o.pretty, "Indent the JSON report");

  auto mode_opt = [&](CLI::App* cmd) {
    cmd->add_option("--mode", o.mode, "Variety mode")
        ->check(CLI::IsMember({"uniform", "empirical"}));
  };
  auto interval_opts = [&](CLI::App* cmd) {
    cmd->add_option("--from", o.from, "Earlier time index")->required();
    cmd->add_option("--to", o.to, "Later time index")->required();
  };

  auto* variety_cmd = app.add_subcommand("variety", "Variety of a set or of counts, in bits");
  variety_cmd->add_option("--counts", o.counts, "Inline counts: label=n,label=n");
  variety_cmd->add_option("--labels", o.labels, "Inline labels: a,b,c");
  variety_cmd->add_option("--file", o.file, "JSON object of counts or array of labels");
  mode_opt(variety_cmd);

  auto* partition_cmd = app.add_subcommand("partition", "Core/periphery partition of a system");
  partition_cmd->add_option("--trace", o.trace, "Trace file (JSONL)")->required();
  partition_cmd->add_option("--system", o.system, "System id")->required();
  interval_opts(partition_cmd);

  auto* dynamics_cmd = app.add_subcommand("dynamics", "Membership timelines and absorption events");
  dynamics_cmd->add_option("--trace", o.trace, "Trace file (JSONL)")->required();
  dynamics_cmd->add_option("--system", o.system, "System id")->required();
  dynamics_cmd->add_option("--element", o.element, "Restrict timelines to one element");
  dynamics_cmd->add_option("--component", o.component, "Restrict timelines to one component")
      ->check(CLI::IsMember({"input", "output"}));

  auto* classify_cmd = app.add_subcommand("classify", "System/environment symmetry cell");
  classify_cmd->add_option("--trace", o.trace, "Trace file (JSONL)")->required();
  classify_cmd->add_option("--system", o.system, "System id (defaults to the declared pair)");
  classify_cmd->add_option("--environment", o.environment, "Environment id");
  classify_cmd->add_option("--epsilon", o.epsilon, "Balanced band in bits")
      ->check(CLI::NonNegativeNumber);
  interval_opts(classify_cmd);
  mode_opt(classify_cmd);

  auto* lrv_cmd = app.add_subcommand("lrv", "Law of requisite variety tools");
  lrv_cmd->require_subcommand(1);
  auto* verify_cmd = lrv_cmd->add_subcommand("verify", "Check the outcome-variety lower bound");
  verify_cmd->add_option("--table", o.table, "Outcome table (JSON)")->required();

  auto* regulator_cmd = app.add_subcommand("regulator", "Regulator policy tools");
  regulator_cmd->require_subcommand(1);
  auto* synth_cmd = regulator_cmd->add_subcommand("synth", "Synthesize a minimal-variety policy");
  synth_cmd->add_option("--table", o.table, "Outcome table (JSON)")->required();
  synth_cmd->add_option("--method", o.method, "brute or greedy")
      ->check(CLI::IsMember({"brute", "greedy"}));

  auto* deduce_cmd = app.add_subcommand("deduce", "Blocking deduction over an interval");
  deduce_cmd->add_option("--trace", o.trace, "Trace file (JSONL)")->required();
  deduce_cmd->add_option("--table", o.table, "Outcome table (JSON)")->required();
  deduce_cmd->add_option("--outcomes", o.outcomes, "Outcome log (JSONL)")->required();
  deduce_cmd->add_option("--system", o.system, "System id (defaults to the declared pair)");
  deduce_cmd->add_option("--environment", o.environment, "Environment id");
  deduce_cmd->add_option("--threshold", o.threshold, "Stability threshold in bits")
      ->check(CLI::NonNegativeNumber);
  interval_opts(deduce_cmd);
  mode_opt(deduce_cmd);

  auto* locate_cmd = app.add_subcommand("locate", "Place a subsystem in its parent's core/periphery");
  locate_cmd->add_option("--trace", o.trace, "Trace file (JSONL)")->required();
  locate_cmd->add_option("--system", o.system, "Parent system id")->required();
  locate_cmd->add_option("--subsystem", o.subsystem, "Subsystem id")->required();
  interval_opts(locate_cmd);

  auto* simulate_cmd = app.add_subcommand("simulate", "Deterministic trace generators");
  simulate_cmd->require_subcommand(1);
  auto sim_opts = [&](CLI::App* cmd) {
    cmd->add_option("--seed", o.seed, "Generator seed");
    cmd->add_option("--steps", o.steps, "Number of steps")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--cadence", o.cadence, "Steps between snapshots")
        ->required()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", o.out_path, "Trace output file")->required();
  };
  auto* sim_regulator = simulate_cmd->add_subcommand("regulator", "Adaptive regulator game");
  sim_opts(sim_regulator);
  sim_regulator->add_option("--table", o.table, "Game table (JSON)")->required();
  sim_regulator->add_option("--outcomes", o.outcomes_out, "Outcome log output file");
  auto* sim_drift = simulate_cmd->add_subcommand("drift", "Drifting environment alphabet");
  sim_opts(sim_drift);
  sim_drift->add_option("--drift-rate", o.drift_rate, "Fraction replaced per window")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  sim_drift->add_option("--alphabet", o.alphabet, "Alphabet size")
      ->required()
      ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()));

  for (auto* sub : app.get_subcommands({})) {
    sub->fallthrough();
    for (auto* nested : sub->get_subcommands({})) nested->fallthrough();
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  RunManifest manifest;
  Json result;
  try {
    if (variety_cmd->parsed()) {
      manifest.command = "variety";
      result = run_variety(o, manifest);
    } else if (partition_cmd->parsed()) {
      manifest.command = "partition";
      result = run_partition(o, manifest);
    } else if (dynamics_cmd->parsed()) {
      manifest.command = "dynamics";
      result = run_dynamics(o, manifest);
    } else if (classify_cmd->parsed()) {
      manifest.command = "classify";
      result = run_classify(o, manifest);
    } else if (verify_cmd->parsed()) {
      manifest.command = "lrv verify";
      result = run_lrv_verify(o, manifest);
    } else if (synth_cmd->parsed()) {
      manifest.command = "regulator synth";
      result = run_regulator_synth(o, manifest);
    } else if (deduce_cmd->parsed()) {
      manifest.command = "deduce";
      result = run_deduce(o, manifest);
    } else if (locate_cmd->parsed()) {
      manifest.command = "locate";
      result = run_locate(o, manifest);
    } else if (sim_regulator->parsed()) {
      manifest.command = "simulate regulator";
      result = run_simulate_regulator(o, manifest);
    } else if (sim_drift->parsed()) {
      manifest.command = "simulate drift";
      result = run_simulate_drift(o, manifest);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: internal-error: " << e.what() << '\n';
    return kExitValidation;
  }
  manifest.flags["pretty"] = o.pretty;

  Json report;
  report["manifest"] = manifest.to_json();
  report["result"] = std::move(result);
  out << canonical_dump(report, o.pretty);
  return kExitOk;
}

}  // namespace varietylab::cli
