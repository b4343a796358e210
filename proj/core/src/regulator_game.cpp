// SPDX-License-Identifier: Apache-2.0
#include "varietylab/regulator_game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <thread>

#include <nlohmann/json.hpp>

#include "varietylab/error.hpp"

namespace varietylab {

namespace {

Distribution make_disturbance_dist(const std::vector<Label>& disturbances,
                                   const std::optional<std::vector<double>>& probabilities) {
  if (!probabilities) {
    return Distribution(disturbances,
                        std::vector<double>(disturbances.size(),
                                            1.0 / static_cast<double>(disturbances.size())));
  }
  if (probabilities->size() != disturbances.size()) {
    throw Error("invalid-table", "p_disturbance needs one probability per disturbance");
  }
  return Distribution(disturbances, *probabilities);
}

void check_labels(const std::vector<Label>& labels, const char* what) {
  if (labels.empty()) throw Error("invalid-table", std::string("no ") + what);
  LabelSet seen;
  for (const auto& l : labels) {
    if (l.empty()) throw Error("invalid-table", std::string("empty label in ") + what);
    if (!seen.insert(l).second) {
      throw Error("invalid-table", std::string("duplicate label '") + l + "' in " + what);
    }
  }
}

}  // namespace

OutcomeTable::OutcomeTable(std::vector<Label> disturbances, std::vector<Label> responses,
                           std::vector<std::vector<Label>> outcomes,
                           std::optional<std::vector<double>> disturbance_probabilities)
    : disturbances_((check_labels(disturbances, "disturbances"), std::move(disturbances))),
      responses_((check_labels(responses, "responses"), std::move(responses))),
      outcomes_(std::move(outcomes)),
      dist_(make_disturbance_dist(disturbances_, disturbance_probabilities)) {
  if (outcomes_.size() != disturbances_.size()) {
    throw Error("invalid-table", "outcomes needs one row per disturbance");
  }
  std::set<Label> labels;
  for (const auto& row : outcomes_) {
    if (row.size() != responses_.size()) {
      throw Error("invalid-table", "every outcome row needs one cell per response");
    }
    for (const auto& z : row) {
      if (z.empty()) throw Error("invalid-table", "empty outcome label");
      labels.insert(z);
    }
  }
  outcome_labels_.assign(labels.begin(), labels.end());
  outcome_ids_.reserve(disturbances_.size() * responses_.size());
  for (const auto& row : outcomes_) {
    for (const auto& z : row) {
      auto it = std::lower_bound(outcome_labels_.begin(), outcome_labels_.end(), z);
      outcome_ids_.push_back(static_cast<std::size_t>(it - outcome_labels_.begin()));
    }
  }
}

std::optional<std::size_t> OutcomeTable::disturbance_index(std::string_view label) const {
  auto it = std::find(disturbances_.begin(), disturbances_.end(), label);
  if (it == disturbances_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - disturbances_.begin());
}

std::optional<std::size_t> OutcomeTable::response_index(std::string_view label) const {
  auto it = std::find(responses_.begin(), responses_.end(), label);
  if (it == responses_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - responses_.begin());
}

OutcomeTable parse_outcome_table(std::string_view json_text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error("invalid-table", e.what());
  }
  if (!doc.is_object()) throw Error("invalid-table", "table must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "disturbances" && key != "responses" && key != "outcomes" &&
        key != "p_disturbance") {
      throw Error("invalid-table", "unexpected key \"" + key + "\"");
    }
  }

  auto label_of = [](const json& v) -> Label {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return v.dump();
    throw Error("invalid-table", "labels must be strings or integers");
  };
  auto labels = [&](const char* key) {
    if (!doc.contains(key) || !doc[key].is_array()) {
      throw Error("invalid-table", std::string("\"") + key + "\" must be an array");
    }
    std::vector<Label> out;
    for (const auto& v : doc[key]) out.push_back(label_of(v));
    return out;
  };

  auto disturbances = labels("disturbances");
  auto responses = labels("responses");
  if (!doc.contains("outcomes") || !doc["outcomes"].is_array()) {
    throw Error("invalid-table", "\"outcomes\" must be an array of rows");
  }
  std::vector<std::vector<Label>> outcomes;
  for (const auto& row : doc["outcomes"]) {
    if (!row.is_array()) throw Error("invalid-table", "outcome rows must be arrays");
    auto& cells = outcomes.emplace_back();
    for (const auto& z : row) cells.push_back(label_of(z));
  }

  std::optional<std::vector<double>> probabilities;
  if (auto p = doc.find("p_disturbance"); p != doc.end()) {
    if (!p->is_array()) throw Error("invalid-table", "\"p_disturbance\" must be an array");
    probabilities.emplace();
    for (const auto& v : *p) {
      if (!v.is_number()) throw Error("invalid-table", "probabilities must be numbers");
      probabilities->push_back(v.get<double>());
    }
  }
  return OutcomeTable(std::move(disturbances), std::move(responses), std::move(outcomes),
                      std::move(probabilities));
}

std::vector<std::size_t> policy_indices(const OutcomeTable& table, const RegulatorPolicy& policy) {
  if (policy.mapping.size() != table.disturbance_count()) {
    throw Error("invalid-policy", "policy must map every disturbance exactly once");
  }
  std::vector<std::size_t> out(table.disturbance_count());
  for (const auto& [d, r] : policy.mapping) {
    auto di = table.disturbance_index(d);
    auto ri = table.response_index(r);
    if (!di) throw Error("invalid-policy", "unknown disturbance '" + d + "'");
    if (!ri) throw Error("invalid-policy", "unknown response '" + r + "'");
    out[*di] = *ri;
  }
  return out;
}

RegulatorPolicy policy_from_indices(const OutcomeTable& table,
                                    const std::vector<std::size_t>& responses) {
  RegulatorPolicy policy;
  for (std::size_t d = 0; d < table.disturbance_count(); ++d) {
    policy.mapping.emplace(table.disturbances()[d], table.responses().at(responses.at(d)));
  }
  return policy;
}

namespace {

/// Outcome masses for a policy given as response indices.
std::vector<double> outcome_masses(const OutcomeTable& table,
                                   const std::vector<std::size_t>& responses) {
  std::vector<double> mass(table.outcome_labels().size(), 0.0);
  const auto& p = table.disturbance_distribution().probabilities();
  for (std::size_t d = 0; d < responses.size(); ++d) {
    mass[table.outcome_index(d, responses[d])] += p[d];
  }
  return mass;
}

double policy_bits(const OutcomeTable& table, const std::vector<std::size_t>& responses) {
  return entropy_bits(outcome_masses(table, responses));
}

std::int64_t rounded_key(double bits) { return std::llround(bits * 1e12); }

struct Candidate {
  std::int64_t key = std::numeric_limits<std::int64_t>::max();
  std::uint64_t rank = std::numeric_limits<std::uint64_t>::max();

  bool better_than(const Candidate& o) const {
    return key != o.key ? key < o.key : rank < o.rank;
  }
};

/// Scans policy ranks [begin, end). Rank digits are response indices with the
/// first disturbance most significant, so rank order is lexicographic order.
Candidate scan_range(const OutcomeTable& table, std::uint64_t begin, std::uint64_t end) {
  const std::size_t n_d = table.disturbance_count();
  const std::size_t n_r = table.response_count();
  const auto& p = table.disturbance_distribution().probabilities();

  std::vector<std::size_t> digits(n_d, 0);
  std::uint64_t rest = begin;
  for (std::size_t i = n_d; i-- > 0;) {
    digits[i] = static_cast<std::size_t>(rest % n_r);
    rest /= n_r;
  }

  std::vector<double> mass(table.outcome_labels().size(), 0.0);
  std::vector<std::size_t> touched;
  touched.reserve(n_d);

  Candidate best;
  for (std::uint64_t rank = begin; rank < end; ++rank) {
    for (std::size_t d = 0; d < n_d; ++d) {
      const std::size_t z = table.outcome_index(d, digits[d]);
      if (mass[z] == 0.0) touched.push_back(z);
      mass[z] += p[d];
    }
    double h = 0.0;
    for (std::size_t z : touched) {
      if (mass[z] > 0.0) h -= mass[z] * std::log2(mass[z]);
      mass[z] = 0.0;
    }
    touched.clear();

    const Candidate c{rounded_key(h > 0.0 ? h : 0.0), rank};
    if (c.better_than(best)) best = c;

    for (std::size_t i = n_d; i-- > 0;) {
      if (++digits[i] < n_r) break;
      digits[i] = 0;
    }
  }
  return best;
}

std::vector<std::size_t> digits_of(std::uint64_t rank, std::size_t n_d, std::size_t n_r) {
  std::vector<std::size_t> digits(n_d, 0);
  for (std::size_t i = n_d; i-- > 0;) {
    digits[i] = static_cast<std::size_t>(rank % n_r);
    rank /= n_r;
  }
  return digits;
}

}  // namespace

Distribution outcome_distribution(const OutcomeTable& table, const RegulatorPolicy& policy) {
  const auto responses = policy_indices(table, policy);
  const auto mass = outcome_masses(table, responses);
  std::vector<bool> reached(mass.size(), false);
  for (std::size_t d = 0; d < responses.size(); ++d) {
    reached[table.outcome_index(d, responses[d])] = true;
  }
  // Renormalize so a single reached outcome is an exact point mass.
  double total = 0.0;
  for (double m : mass) total += m;
  std::vector<Label> elements;
  std::vector<double> probabilities;
  for (std::size_t z = 0; z < mass.size(); ++z) {
    if (!reached[z]) continue;
    elements.push_back(table.outcome_labels()[z]);
    probabilities.push_back(mass[z] / total);
  }
  return Distribution(std::move(elements), std::move(probabilities));
}

double lrv_lower_bound(const OutcomeTable& table) {
  const double bound = variety(table.disturbance_distribution()) -
                       std::log2(static_cast<double>(table.response_count()));
  return std::max(bound, 0.0);
}

PolicySearchResult min_outcome_variety_bruteforce(const OutcomeTable& table,
                                                  const SearchOptions& options) {
  const std::size_t n_d = table.disturbance_count();
  const std::size_t n_r = table.response_count();

  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n_d; ++i) {
    if (total > options.budget / n_r) {
      throw Error("search-budget", std::to_string(n_r) + "^" + std::to_string(n_d) +
                                       " policies exceed the budget of " +
                                       std::to_string(options.budget));
    }
    total *= n_r;
  }
  if (total > options.budget) {
    throw Error("search-budget", std::to_string(total) + " policies exceed the budget of " +
                                     std::to_string(options.budget));
  }

  constexpr std::uint64_t kMinPerWorker = 1u << 15;
  unsigned workers = options.workers;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(
      std::clamp<std::uint64_t>(total / kMinPerWorker, 1, workers));

  Candidate best;
  if (workers == 1) {
    best = scan_range(table, 0, total);
  } else {
    std::vector<Candidate> partial(workers);
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t begin = total * w / workers;
      const std::uint64_t end = total * (w + 1) / workers;
      pool.emplace_back([&, w, begin, end] { partial[w] = scan_range(table, begin, end); });
    }
    pool.clear();
    for (const auto& c : partial) {
      if (c.better_than(best)) best = c;
    }
  }

  const auto responses = digits_of(best.rank, n_d, n_r);
  auto policy = policy_from_indices(table, responses);
  const double bits = variety(outcome_distribution(table, policy));
  return {std::move(policy), bits, total};
}

PolicySearchResult greedy_policy(const OutcomeTable& table) {
  const std::size_t n_d = table.disturbance_count();
  const std::size_t n_r = table.response_count();
  const std::size_t n_z = table.outcome_labels().size();
  const auto& p = table.disturbance_distribution().probabilities();

  std::vector<double> achievable(n_z, 0.0);
  for (std::size_t d = 0; d < n_d; ++d) {
    std::vector<bool> hit(n_z, false);
    for (std::size_t r = 0; r < n_r; ++r) hit[table.outcome_index(d, r)] = true;
    for (std::size_t z = 0; z < n_z; ++z) {
      if (hit[z]) achievable[z] += p[d];
    }
  }
  const auto target = static_cast<std::size_t>(
      std::max_element(achievable.begin(), achievable.end()) - achievable.begin());

  std::vector<std::size_t> responses(n_d, 0);
  for (std::size_t d = 0; d < n_d; ++d) {
    for (std::size_t r = 0; r < n_r; ++r) {
      if (table.outcome_index(d, r) == target) {
        responses[d] = r;
        break;
      }
    }
  }

  std::uint64_t evaluated = 1;
  double current = policy_bits(table, responses);
  for (;;) {
    double best_bits = current;
    std::optional<std::pair<std::size_t, std::size_t>> best_move;
    for (std::size_t d = 0; d < n_d; ++d) {
      const std::size_t keep = responses[d];
      for (std::size_t r = 0; r < n_r; ++r) {
        if (r == keep) continue;
        responses[d] = r;
        const double h = policy_bits(table, responses);
        ++evaluated;
        if (h < best_bits - 1e-12) {
          best_bits = h;
          best_move = {d, r};
        }
      }
      responses[d] = keep;
    }
    if (!best_move) break;
    responses[best_move->first] = best_move->second;
    current = best_bits;
  }

  auto policy = policy_from_indices(table, responses);
  const double bits = variety(outcome_distribution(table, policy));
  return {std::move(policy), bits, evaluated};
}

std::string_view to_string(TableClass cls) noexcept {
  switch (cls) {
    case TableClass::latin_square: return "latin_square";
    case TableClass::injective_per_response: return "injective_per_response";
    case TableClass::general: return "general";
    case TableClass::degenerate: return "degenerate";
  }
  return "general";
}

TableClass table_class(const OutcomeTable& table) {
  const std::size_t n_d = table.disturbance_count();
  const std::size_t n_r = table.response_count();

  auto column_distinct = [&](std::size_t r) {
    std::set<std::size_t> seen;
    for (std::size_t d = 0; d < n_d; ++d) seen.insert(table.outcome_index(d, r));
    return seen.size();
  };
  auto row_distinct = [&](std::size_t d) {
    std::set<std::size_t> seen;
    for (std::size_t r = 0; r < n_r; ++r) seen.insert(table.outcome_index(d, r));
    return seen.size();
  };

  bool injective = true;
  for (std::size_t r = 0; r < n_r; ++r) injective = injective && column_distinct(r) == n_d;

  if (n_d == n_r && injective && table.outcome_labels().size() == n_d) {
    bool rows_ok = true;
    for (std::size_t d = 0; d < n_d; ++d) rows_ok = rows_ok && row_distinct(d) == n_r;
    if (rows_ok) return TableClass::latin_square;
  }
  if (injective) return TableClass::injective_per_response;
  if (n_d > 1) {
    for (std::size_t r = 0; r < n_r; ++r) {
      if (column_distinct(r) == 1) return TableClass::degenerate;
    }
  }
  return TableClass::general;
}

BoundReport verify_bound(const OutcomeTable& table, const SearchOptions& options) {
  BoundReport report;
  report.disturbance_bits = variety(table.disturbance_distribution());
  report.response_bits = std::log2(static_cast<double>(table.response_count()));
  report.lower_bound_bits = lrv_lower_bound(table);
  report.table_class = table_class(table);
  report.bound_applicable = report.table_class == TableClass::latin_square ||
                            report.table_class == TableClass::injective_per_response;

  auto best = min_outcome_variety_bruteforce(table, options);
  report.achieved_min_bits = best.bits;
  report.optimal_policy = std::move(best.policy);
  report.bound_satisfied = report.achieved_min_bits >= report.lower_bound_bits - kBoundTolerance;
  if (report.bound_applicable && !report.bound_satisfied) {
    throw Error("bound-violated", "achieved " + std::to_string(report.achieved_min_bits) +
                                      " bits is below the bound " +
                                      std::to_string(report.lower_bound_bits));
  }
  return report;
}

}  // namespace varietylab
