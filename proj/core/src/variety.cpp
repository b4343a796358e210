// SPDX-License-Identifier: Apache-2.0
#include "varietylab/variety.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "varietylab/error.hpp"

namespace varietylab {

std::string_view to_string(VarietyMode mode) noexcept {
  return mode == VarietyMode::uniform ? "uniform" : "empirical";
}

VarietyMode parse_variety_mode(std::string_view text) {
  if (text == "uniform") return VarietyMode::uniform;
  if (text == "empirical") return VarietyMode::empirical;
  throw Error("invalid-mode", "expected uniform or empirical, got '" + std::string(text) + "'");
}

Distribution::Distribution(std::vector<Label> elements, std::vector<double> probabilities)
    : elements_(std::move(elements)), probabilities_(std::move(probabilities)) {
  if (elements_.empty()) throw Error("empty-support", "distribution has no elements");
  if (elements_.size() != probabilities_.size()) {
    throw Error("invalid-distribution", "element and probability counts differ");
  }
  LabelSet seen;
  for (const auto& label : elements_) {
    if (!seen.insert(label).second) {
      throw Error("invalid-distribution", "duplicate element '" + label + "'");
    }
  }
  double total = 0.0;
  for (double p : probabilities_) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw Error("invalid-distribution", "probabilities must be finite and non-negative");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kDistributionSumTolerance) {
    throw Error("invalid-distribution", "probabilities sum to " + std::to_string(total));
  }
}

Distribution Distribution::uniform(const LabelSet& labels) {
  if (labels.empty()) throw Error("empty-support", "uniform distribution over empty set");
  const double p = 1.0 / static_cast<double>(labels.size());
  return Distribution({labels.begin(), labels.end()}, std::vector<double>(labels.size(), p));
}

Distribution Distribution::point_mass(Label label) {
  return Distribution({std::move(label)}, {1.0});
}

double Distribution::probability(std::string_view label) const {
  auto it = std::find(elements_.begin(), elements_.end(), label);
  if (it == elements_.end()) return 0.0;
  return probabilities_[static_cast<std::size_t>(it - elements_.begin())];
}

double entropy_bits(std::span<const double> probabilities) noexcept {
  double h = 0.0;
  for (double p : probabilities) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  // Rounding can leave -0.0 or a tiny negative for point masses.
  return h > 0.0 ? h : 0.0;
}

double variety(const Distribution& dist) { return entropy_bits(dist.probabilities()); }

double uniform_variety(const LabelSet& labels) {
  if (labels.empty()) throw Error("empty-support", "variety of the empty set is undefined");
  return std::log2(static_cast<double>(labels.size()));
}

Distribution empirical_distribution(const Counts& counts) {
  std::uint64_t total = 0;
  for (const auto& [label, n] : counts) total += n;
  if (total == 0) throw Error("empty-support", "all counts are zero");

  std::vector<Label> elements;
  std::vector<double> probabilities;
  for (const auto& [label, n] : counts) {
    if (n == 0) continue;
    elements.push_back(label);
    probabilities.push_back(static_cast<double>(n) / static_cast<double>(total));
  }
  return Distribution(std::move(elements), std::move(probabilities));
}

namespace {

void collect_counts(const LabelSet& part, const Counts* counts, std::string_view role,
                    std::vector<std::uint64_t>& out) {
  for (const auto& label : part) {
    const auto it = counts ? counts->find(label) : Counts::const_iterator{};
    if (!counts || it == counts->end()) {
      throw Error("missing-counts",
                  "no " + std::string(role) + " count for element '" + label + "'");
    }
    out.push_back(it->second);
  }
}

}  // namespace

double component_pair_variety(const LabelSet& inputs, const LabelSet& outputs,
                              VarietyMode mode, const Counts* input_counts,
                              const Counts* output_counts) {
  const std::size_t n = inputs.size() + outputs.size();
  if (n == 0) return 0.0;
  if (mode == VarietyMode::uniform) return std::log2(static_cast<double>(n));

  std::vector<std::uint64_t> weights;
  weights.reserve(n);
  collect_counts(inputs, input_counts, "input", weights);
  collect_counts(outputs, output_counts, "output", weights);

  const std::uint64_t total = std::accumulate(weights.begin(), weights.end(), std::uint64_t{0});
  if (total == 0) return 0.0;
  std::vector<double> probabilities;
  probabilities.reserve(n);
  for (auto w : weights) {
    probabilities.push_back(static_cast<double>(w) / static_cast<double>(total));
  }
  return entropy_bits(probabilities);
}

}  // namespace varietylab
