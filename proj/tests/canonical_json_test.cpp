// SPDX-License-Identifier: Apache-2.0
#include "varietylab/canonical_json.hpp"

#include <gtest/gtest.h>

#include <limits>

namespace varietylab {
namespace {

TEST(FormatNumber, TwelveSignificantDigits) {
  EXPECT_EQ(format_number(1.0), "1.0");
  EXPECT_EQ(format_number(0.0), "0.0");
  EXPECT_EQ(format_number(-0.0), "0.0");
  EXPECT_EQ(format_number(1.5849625007211563), "1.58496250072");
  EXPECT_EQ(format_number(0.1 + 0.2), "0.3");
  EXPECT_EQ(format_number(1e-20), "1e-20");
  EXPECT_EQ(format_number(123456789012345.0), "1.23456789012e+14");
  EXPECT_EQ(format_number(-2.5), "-2.5");
}

TEST(FormatNumber, NonFiniteIsNull) {
  EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "null");
  EXPECT_EQ(format_number(std::numeric_limits<double>::quiet_NaN()), "null");
}

TEST(CanonicalDump, KeepsInsertionOrder) {
  Json j;
  j["zeta"] = 1;
  j["alpha"] = 2.0;
  j["mid"] = Json::array({"x", true, nullptr});
  EXPECT_EQ(canonical_dump(j), "{\"zeta\":1,\"alpha\":2.0,\"mid\":[\"x\",true,null]}\n");
}

TEST(CanonicalDump, Pretty) {
  Json j;
  j["a"] = Json::array({1, 0.5});
  j["b"] = Json::object();
  j["c"] = Json::array();
  EXPECT_EQ(canonical_dump(j, true),
            "{\n  \"a\": [\n    1,\n    0.5\n  ],\n  \"b\": {},\n  \"c\": []\n}\n");
}

TEST(CanonicalDump, EscapesStrings) {
  Json j = Json::array({"q\"uote", "tab\t"});
  EXPECT_EQ(canonical_dump(j), "[\"q\\\"uote\",\"tab\\t\"]\n");
}

TEST(CanonicalDump, OutputParsesBack) {
  Json j;
  j["bits"] = 0.4689955935892812;
  j["n"] = 3;
  const auto back = Json::parse(canonical_dump(j));
  EXPECT_NEAR(back["bits"].get<double>(), 0.4689955935892812, 1e-12);
  EXPECT_EQ(back["n"].get<int>(), 3);
}

}  // namespace
}  // namespace varietylab
