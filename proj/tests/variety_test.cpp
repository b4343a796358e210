// SPDX-License-Identifier: Apache-2.0
#include "varietylab/variety.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "test_util.hpp"

namespace varietylab {
namespace {

using testing::error_code;

TEST(Variety, UniformOverEightLabelsIsThreeBits) {
  LabelSet labels;
  for (int i = 0; i < 8; ++i) labels.insert("l" + std::to_string(i));
  EXPECT_DOUBLE_EQ(variety(Distribution::uniform(labels)), 3.0);
}

TEST(Variety, PointMassIsZero) {
  EXPECT_EQ(variety(Distribution::point_mass("a")), 0.0);
}

TEST(Variety, HalfQuarterQuarterMatchesOracle) {
  // Oracle: -(0.5 log2 0.5 + 2 * 0.25 log2 0.25) = 1.5
  ASSERT_NEAR(oracle::entropy({0.5, 0.25, 0.25}), 1.5, 1e-15);
  Distribution d({"a", "b", "c"}, {0.5, 0.25, 0.25});
  EXPECT_NEAR(variety(d), 1.5, 1e-12);
}

TEST(Variety, ZeroProbabilityContributesNothing) {
  Distribution d({"a", "b"}, {1.0, 0.0});
  EXPECT_EQ(variety(d), 0.0);
}

TEST(Variety, EmptySupportRejected) {
  EXPECT_EQ(error_code([] { Distribution({}, {}); }), "empty-support");
  EXPECT_EQ(error_code([] { uniform_variety({}); }), "empty-support");
}

TEST(Variety, DistributionInvariants) {
  EXPECT_EQ(error_code([] { Distribution({"a", "a"}, {0.5, 0.5}); }), "invalid-distribution");
  EXPECT_EQ(error_code([] { Distribution({"a", "b"}, {0.5, 0.6}); }), "invalid-distribution");
  EXPECT_EQ(error_code([] { Distribution({"a", "b"}, {1.5, -0.5}); }), "invalid-distribution");
  EXPECT_EQ(error_code([] { Distribution({"a"}, {0.5, 0.5}); }), "invalid-distribution");
  EXPECT_NO_THROW(Distribution({"a", "b"}, {0.5, 0.5 + 5e-10}));
}

TEST(UniformVariety, Examples) {
  EXPECT_EQ(uniform_variety({"a"}), 0.0);
  EXPECT_DOUBLE_EQ(uniform_variety({"a", "b", "c", "d"}), 2.0);
  const LabelSet three{"a", "b", "c"};
  EXPECT_NEAR(uniform_variety(three), 1.584962500721156, 1e-12);
  EXPECT_NEAR(uniform_variety(three), variety(Distribution::uniform(three)), 1e-12);
}

TEST(EmpiricalDistribution, Examples) {
  auto even = empirical_distribution({{"a", 2}, {"b", 2}});
  EXPECT_DOUBLE_EQ(even.probability("a"), 0.5);
  EXPECT_DOUBLE_EQ(even.probability("b"), 0.5);

  auto skew = empirical_distribution({{"a", 3}, {"b", 1}});
  EXPECT_DOUBLE_EQ(skew.probability("a"), 0.75);
  EXPECT_DOUBLE_EQ(skew.probability("b"), 0.25);

  auto point = empirical_distribution({{"a", 1}, {"b", 0}});
  EXPECT_EQ(point.size(), 1u);
  EXPECT_EQ(point.elements().front(), "a");
  EXPECT_EQ(variety(point), 0.0);

  EXPECT_EQ(error_code([] { empirical_distribution({{"a", 0}}); }), "empty-support");
  EXPECT_EQ(error_code([] { empirical_distribution({}); }), "empty-support");
}

TEST(VarietyProperties, BoundsAndOracleOnRandomDistributions) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng() % 16;
    auto p = oracle::random_rational_distribution(rng, n);
    Distribution d(oracle::numbered(n), p);
    const double v = variety(d);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, std::log2(static_cast<double>(n)) + 1e-12);
    EXPECT_NEAR(v, oracle::entropy(p), 1e-12);
  }
}

TEST(VarietyProperties, ScalingCountsLeavesVarietyUnchanged) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    Counts counts;
    const std::size_t n = 1 + rng() % 10;
    for (std::size_t i = 0; i < n; ++i) counts["e" + std::to_string(i)] = 1 + rng() % 50;
    const std::uint64_t k = 1 + rng() % 9;
    Counts scaled = counts;
    for (auto& [label, c] : scaled) c *= k;
    EXPECT_NEAR(variety(empirical_distribution(scaled)), variety(empirical_distribution(counts)),
                1e-12);
  }
}

TEST(ComponentPairVariety, DisjointUnionKeepsIdenticalLabelsApart) {
  // "x" as an input and "x" as an output are two elements.
  EXPECT_DOUBLE_EQ(component_pair_variety({"x"}, {"x"}, VarietyMode::uniform), 1.0);
  EXPECT_EQ(component_pair_variety({}, {}, VarietyMode::uniform), 0.0);
  EXPECT_DOUBLE_EQ(component_pair_variety({"a", "b", "c"}, {"y"}, VarietyMode::uniform), 2.0);
}

TEST(ComponentPairVariety, EmpiricalUsesCountsAndRequiresThem) {
  Counts in{{"x", 3}};
  Counts out{{"x", 1}};
  EXPECT_NEAR(component_pair_variety({"x"}, {"x"}, VarietyMode::empirical, &in, &out),
              oracle::entropy({0.75, 0.25}), 1e-12);
  EXPECT_EQ(error_code([&] {
              component_pair_variety({"x"}, {"y"}, VarietyMode::empirical, &in, &out);
            }),
            "missing-counts");
  EXPECT_EQ(error_code([] { component_pair_variety({"x"}, {}, VarietyMode::empirical); }),
            "missing-counts");
  Counts zero{{"x", 0}};
  EXPECT_EQ(component_pair_variety({"x"}, {}, VarietyMode::empirical, &zero, nullptr), 0.0);
}

TEST(VarietyMode, ParseRoundTrip) {
  EXPECT_EQ(parse_variety_mode("uniform"), VarietyMode::uniform);
  EXPECT_EQ(parse_variety_mode(to_string(VarietyMode::empirical)), VarietyMode::empirical);
  EXPECT_EQ(error_code([] { parse_variety_mode("other"); }), "invalid-mode");
}

}  // namespace
}  // namespace varietylab
