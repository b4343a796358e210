// SPDX-License-Identifier: Apache-2.0
#pragma once

/// The regulator game: a disturbance x response -> outcome table, the
/// requisite-variety lower bound on outcome variety, and synthesis of
/// deterministic regulator policies that minimize outcome variety.

#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "varietylab/variety.hpp"

namespace varietylab {

/// Disturbance x response payoff table with a distribution over disturbances.
class OutcomeTable {
 public:
  /// `outcomes[d][r]` is the outcome of response r against disturbance d.
  /// Omitted probabilities mean uniform disturbances.
  /// Throws Error("invalid-table") on shape or label problems and
  /// Error("invalid-distribution") for bad probabilities.
  OutcomeTable(std::vector<Label> disturbances, std::vector<Label> responses,
               std::vector<std::vector<Label>> outcomes,
               std::optional<std::vector<double>> disturbance_probabilities = std::nullopt);

  const std::vector<Label>& disturbances() const noexcept { return disturbances_; }
  const std::vector<Label>& responses() const noexcept { return responses_; }
  const std::vector<std::vector<Label>>& outcomes() const noexcept { return outcomes_; }
  const Distribution& disturbance_distribution() const noexcept { return dist_; }

  std::size_t disturbance_count() const noexcept { return disturbances_.size(); }
  std::size_t response_count() const noexcept { return responses_.size(); }

  /// Distinct outcome labels, sorted.
  const std::vector<Label>& outcome_labels() const noexcept { return outcome_labels_; }
  /// Index into outcome_labels() of outcomes()[d][r].
  std::size_t outcome_index(std::size_t d, std::size_t r) const noexcept {
    return outcome_ids_[d * responses_.size() + r];
  }

  std::optional<std::size_t> disturbance_index(std::string_view label) const;
  std::optional<std::size_t> response_index(std::string_view label) const;

 private:
  std::vector<Label> disturbances_;
  std::vector<Label> responses_;
  std::vector<std::vector<Label>> outcomes_;
  Distribution dist_;
  std::vector<Label> outcome_labels_;
  std::vector<std::size_t> outcome_ids_;
};

/// Parses the outcome-table JSON file format:
/// {"disturbances": [...], "responses": [...], "outcomes": [[...]], "p_disturbance": [...]?}
OutcomeTable parse_outcome_table(std::string_view json_text);

/// Deterministic regulator: one response per disturbance.
struct RegulatorPolicy {
  std::map<Label, Label> mapping;

  friend bool operator==(const RegulatorPolicy&, const RegulatorPolicy&) = default;
};

/// Response index per disturbance index. Throws Error("invalid-policy") when
/// the policy is not a total function onto valid responses.
std::vector<std::size_t> policy_indices(const OutcomeTable& table, const RegulatorPolicy& policy);
RegulatorPolicy policy_from_indices(const OutcomeTable& table,
                                    const std::vector<std::size_t>& responses);

/// Distribution over the outcomes the policy can produce (sorted labels).
Distribution outcome_distribution(const OutcomeTable& table, const RegulatorPolicy& policy);

/// max{V(disturbances) - log2|responses|, 0}.
double lrv_lower_bound(const OutcomeTable& table);

inline constexpr std::uint64_t kDefaultSearchBudget = 10'000'000;

struct SearchOptions {
  std::uint64_t budget = kDefaultSearchBudget;
  /// 0 picks a worker count from the hardware; 1 forces sequential search.
  unsigned workers = 0;
};

struct PolicySearchResult {
  RegulatorPolicy policy;
  double bits = 0.0;
  std::uint64_t evaluated = 0;
};

/// Exact minimum outcome variety over all |R|^|D| policies. Ties (entropy
/// equal after rounding to 1e-12) go to the lexicographically smallest
/// policy under disturbance then response order; the result does not depend
/// on the worker count. Throws Error("search-budget") when |R|^|D| exceeds
/// the budget.
PolicySearchResult min_outcome_variety_bruteforce(const OutcomeTable& table,
                                                  const SearchOptions& options = {});

/// Hill climb from the policy that steers every disturbance toward the
/// outcome with the largest achievable probability mass, applying the best
/// single-disturbance reassignment until none lowers outcome variety.
PolicySearchResult greedy_policy(const OutcomeTable& table);

enum class TableClass { latin_square, injective_per_response, general, degenerate };

std::string_view to_string(TableClass cls) noexcept;

/// First match of: latin_square, injective_per_response, degenerate, general.
TableClass table_class(const OutcomeTable& table);

struct BoundReport {
  double disturbance_bits = 0.0;
  double response_bits = 0.0;
  double lower_bound_bits = 0.0;
  double achieved_min_bits = 0.0;
  RegulatorPolicy optimal_policy;
  TableClass table_class = TableClass::general;
  bool bound_applicable = false;
  /// achieved >= bound - 1e-9, reported for every class.
  bool bound_satisfied = false;
};

inline constexpr double kBoundTolerance = 1e-9;

/// Brute-forces the minimum and compares it with the lower bound. The bound
/// is asserted only for latin_square and injective_per_response tables, where
/// it is a theorem; a violation there throws Error("bound-violated").
BoundReport verify_bound(const OutcomeTable& table, const SearchOptions& options = {});

}  // namespace varietylab
