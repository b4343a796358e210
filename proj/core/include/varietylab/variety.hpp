// SPDX-License-Identifier: Apache-2.0
#pragma once

/// Variety of finite element collections, measured in bits.
///
/// Variety is the Shannon entropy of an element distribution. Two probability
/// sources are supported: `VarietyMode::uniform` treats every element as
/// equiprobable (log2 of the cardinality), `VarietyMode::empirical` derives
/// probabilities from observation counts.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace varietylab {

using Label = std::string;
using LabelSet = std::set<Label>;
using Counts = std::map<Label, std::uint64_t>;

inline constexpr double kDistributionSumTolerance = 1e-9;

enum class VarietyMode { uniform, empirical };

std::string_view to_string(VarietyMode mode) noexcept;
/// Throws Error("invalid-mode") for anything other than "uniform"/"empirical".
VarietyMode parse_variety_mode(std::string_view text);

/// A validated finite distribution: unique labels, non-negative
/// probabilities summing to 1 within kDistributionSumTolerance.
class Distribution {
 public:
  /// Throws Error("empty-support") for an empty list and
  /// Error("invalid-distribution") for any other invariant violation.
  Distribution(std::vector<Label> elements, std::vector<double> probabilities);

  static Distribution uniform(const LabelSet& labels);
  static Distribution point_mass(Label label);

  const std::vector<Label>& elements() const noexcept { return elements_; }
  const std::vector<double>& probabilities() const noexcept { return probabilities_; }
  std::size_t size() const noexcept { return elements_.size(); }

  /// Probability of `label`, 0 when it is not in the support list.
  double probability(std::string_view label) const;

 private:
  std::vector<Label> elements_;
  std::vector<double> probabilities_;
};

/// -sum p log2 p with 0 log2 0 = 0. No validation; callers pass weights
/// that already sum to one.
double entropy_bits(std::span<const double> probabilities) noexcept;

double variety(const Distribution& dist);

/// log2 |labels|. Throws Error("empty-support") on an empty set.
double uniform_variety(const LabelSet& labels);

/// Normalizes counts, dropping zero-count labels.
/// Throws Error("empty-support") when no count is positive.
Distribution empirical_distribution(const Counts& counts);

/// Variety of the disjoint union of an input part and an output part.
///
/// Elements are tagged with their component role before the union, so an
/// input label never collides with an identical output label. An empty union
/// has variety 0. In empirical mode every element needs a count in the
/// matching map, otherwise Error("missing-counts") is thrown; a union whose
/// counts are all zero also has variety 0.
double component_pair_variety(const LabelSet& inputs, const LabelSet& outputs,
                              VarietyMode mode,
                              const Counts* input_counts = nullptr,
                              const Counts* output_counts = nullptr);

}  // namespace varietylab
