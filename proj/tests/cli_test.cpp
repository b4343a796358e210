// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "varietylab/canonical_json.hpp"
#include "test_util.hpp"

namespace varietylab {
namespace {

namespace fs = std::filesystem;
using testing::fixture;

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;

  Json report() const { return Json::parse(out); }
};

Outcome run_cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  Outcome o;
  o.code = cli::run(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("varietylab_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name, std::ios::binary) << text;
  }

  fs::path dir_;
};

TEST(Sha256, KnownDigests) {
  EXPECT_EQ(cli::sha256_hex(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(cli::sha256_hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_F(CliTest, Variety) {
  const auto uniform = run_cli({"variety", "--labels", "a,b,c,d"});
  ASSERT_EQ(uniform.code, cli::kExitOk) << uniform.err;
  EXPECT_EQ(uniform.report()["result"]["bits"].get<double>(), 2.0);

  const auto empirical = run_cli({"variety", "--counts", "a=9,b=1", "--mode", "empirical"});
  ASSERT_EQ(empirical.code, cli::kExitOk) << empirical.err;
  EXPECT_NEAR(empirical.report()["result"]["bits"].get<double>(), 0.4689955935892812, 1e-11);

  const auto from_file =
      run_cli({"variety", "--file", fixture("counts.json"), "--mode", "empirical"});
  ASSERT_EQ(from_file.code, cli::kExitOk) << from_file.err;
  EXPECT_EQ(from_file.report()["manifest"]["inputs"].size(), 1u);

  EXPECT_EQ(run_cli({"variety", "--counts", "a=x"}).code, cli::kExitValidation);
  EXPECT_EQ(run_cli({"variety", "--labels", "a", "--mode", "bogus"}).code, cli::kExitUsage);
}

TEST_F(CliTest, Partition) {
  const auto r = run_cli({"partition", "--trace", fixture("partition.jsonl"), "--system", "S",
                          "--from", "0", "--to", "1"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto result = r.report()["result"];
  EXPECT_EQ(result["core"]["input"], Json::parse(R"(["b","c"])"));
  EXPECT_EQ(result["periphery"]["input"], Json::parse(R"(["d"])"));
  EXPECT_EQ(result["shed"]["input"], Json::parse(R"(["a"])"));
  EXPECT_EQ(result["core"]["output"], Json::parse(R"(["y1"])"));

  const auto missing = run_cli({"partition", "--trace", fixture("partition.jsonl"), "--system",
                                "S", "--from", "0", "--to", "7"});
  EXPECT_EQ(missing.code, cli::kExitValidation);
  EXPECT_NE(missing.err.find("missing-snapshot"), std::string::npos);
}

TEST_F(CliTest, LrvVerify) {
  const auto r = run_cli({"lrv", "verify", "--table", fixture("modular8x4.json")});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto result = r.report()["result"];
  EXPECT_EQ(result["table_class"], "injective_per_response");
  EXPECT_NEAR(result["lower_bound_bits"].get<double>(), 1.0, 1e-9);
  EXPECT_NEAR(result["achieved_min_bits"].get<double>(), 1.0, 1e-9);
  EXPECT_EQ(result["bound_satisfied"], true);
}

TEST_F(CliTest, RegulatorSynth) {
  for (const std::string method : {"brute", "greedy"}) {
    const auto r = run_cli({"regulator", "synth", "--table", fixture("latin4.json"), "--method",
                            method});
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    const auto result = r.report()["result"];
    EXPECT_EQ(result["method"], method);
    EXPECT_EQ(result["bits"].get<double>(), 0.0);
    EXPECT_EQ(result["policy"].size(), 4u);
  }
  EXPECT_EQ(run_cli({"regulator", "synth", "--table", fixture("latin4.json"), "--method", "x"})
                .code,
            cli::kExitUsage);
}

TEST_F(CliTest, SearchBudget) {
  const auto over = run_cli({"lrv", "verify", "--table", fixture("oversized.json")});
  EXPECT_EQ(over.code, cli::kExitValidation);
  EXPECT_NE(over.err.find("search-budget"), std::string::npos);

  ::setenv("VARIETYLAB_BUDGET", "1000", 1);
  const auto tight = run_cli({"lrv", "verify", "--table", fixture("modular8x4.json")});
  ::setenv("VARIETYLAB_BUDGET", "nope", 1);
  const auto invalid = run_cli({"lrv", "verify", "--table", fixture("latin4.json")});
  ::setenv("VARIETYLAB_BUDGET", "65536", 1);
  const auto exact = run_cli({"lrv", "verify", "--table", fixture("modular8x4.json")});
  ::unsetenv("VARIETYLAB_BUDGET");

  EXPECT_EQ(tight.code, cli::kExitValidation);
  EXPECT_NE(tight.err.find("search-budget"), std::string::npos);
  EXPECT_EQ(invalid.code, cli::kExitValidation);
  EXPECT_NE(invalid.err.find("invalid-budget"), std::string::npos);
  ASSERT_EQ(exact.code, cli::kExitOk) << exact.err;
  EXPECT_EQ(exact.report()["manifest"]["flags"]["budget"], 65536);
}

TEST_F(CliTest, UsageAndValidationExitCodes) {
  EXPECT_EQ(run_cli({}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"partition", "--system", "S"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"--help"}).code, cli::kExitOk);

  const auto io = run_cli({"lrv", "verify", "--table", path("absent.json")});
  EXPECT_EQ(io.code, cli::kExitValidation);
  EXPECT_NE(io.err.find("io-error"), std::string::npos);

  write("bad.jsonl", "{\"t\":0,\"system\":\"S\",\"component\":\"input\",\"elements\":[\"a\",\"a\"]}\n");
  const auto dup = run_cli({"partition", "--trace", path("bad.jsonl"), "--system", "S", "--from",
                            "0", "--to", "0"});
  EXPECT_EQ(dup.code, cli::kExitValidation);
  EXPECT_NE(dup.err.find("duplicate-element"), std::string::npos);
}

TEST_F(CliTest, PrettyFlagAnywhere) {
  const auto before = run_cli({"--pretty", "variety", "--labels", "a,b"});
  const auto after = run_cli({"variety", "--labels", "a,b", "--pretty"});
  ASSERT_EQ(before.code, cli::kExitOk);
  EXPECT_EQ(before.out, after.out);
  EXPECT_NE(before.out.find("\n  \"manifest\""), std::string::npos);
}

TEST_F(CliTest, SimulationPipelineIsDeterministic) {
  const std::vector<std::string> sim = {"simulate", "regulator", "--table",
                                        fixture("latin4.json"), "--seed", "42", "--steps", "200",
                                        "--cadence", "50", "--out", path("trace.jsonl"),
                                        "--outcomes", path("outcomes.jsonl")};
  const auto first = run_cli(sim);
  ASSERT_EQ(first.code, cli::kExitOk) << first.err;
  const auto trace_a = slurp(path("trace.jsonl"));
  const auto log_a = slurp(path("outcomes.jsonl"));
  const auto second = run_cli(sim);
  EXPECT_EQ(first.out, second.out);
  EXPECT_EQ(trace_a, slurp(path("trace.jsonl")));
  EXPECT_EQ(log_a, slurp(path("outcomes.jsonl")));

  const auto manifest = first.report()["manifest"];
  EXPECT_EQ(manifest["seed"], 42);
  EXPECT_EQ(manifest["command"], "simulate regulator");
  EXPECT_EQ(manifest["inputs"][0]["sha256"], cli::sha256_hex(slurp(fixture("latin4.json"))));

  const std::vector<std::string> deduce = {
      "deduce", "--trace", path("trace.jsonl"), "--table", fixture("latin4.json"), "--outcomes",
      path("outcomes.jsonl"), "--from", "150", "--to", "200"};
  const auto d1 = run_cli(deduce);
  ASSERT_EQ(d1.code, cli::kExitOk) << d1.err;
  EXPECT_EQ(d1.out, run_cli(deduce).out);
  EXPECT_EQ(d1.report()["result"]["stability"]["stable"], true);
  EXPECT_EQ(d1.report()["manifest"]["inputs"].size(), 3u);

  const auto dyn =
      run_cli({"dynamics", "--trace", path("trace.jsonl"), "--system", "regulator"});
  ASSERT_EQ(dyn.code, cli::kExitOk) << dyn.err;
  EXPECT_FALSE(dyn.report()["result"]["absorption_events"].empty());

  const auto cls = run_cli({"classify", "--trace", path("trace.jsonl"), "--from", "100", "--to",
                            "150"});
  ASSERT_EQ(cls.code, cli::kExitOk) << cls.err;
  EXPECT_EQ(cls.report()["result"]["system"], "regulator");
  EXPECT_TRUE(cls.report()["result"]["cell"].contains("region"));
}

TEST_F(CliTest, SimulateDrift) {
  const std::vector<std::string> sim = {"simulate", "drift", "--drift-rate", "0.25",
                                        "--alphabet", "8", "--steps", "40", "--cadence", "10",
                                        "--seed", "3", "--out", path("drift.jsonl")};
  const auto r = run_cli(sim);
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto p = run_cli({"partition", "--trace", path("drift.jsonl"), "--system", "environment",
                          "--from", "10", "--to", "20"});
  ASSERT_EQ(p.code, cli::kExitOk) << p.err;
  EXPECT_EQ(p.report()["result"]["periphery"]["input"].size(), 2u);
  EXPECT_EQ(p.report()["result"]["core"]["input"].size(), 6u);

  auto bad = sim;
  bad[3] = "1.5";
  EXPECT_EQ(run_cli(bad).code, cli::kExitUsage);
}

TEST_F(CliTest, Locate) {
  write("nested.jsonl",
        "{\"subsystem\":{\"child\":\"C\",\"parent\":\"P\"}}\n"
        "{\"t\":0,\"system\":\"P\",\"component\":\"input\",\"elements\":[\"a\",\"b\"]}\n"
        "{\"t\":1,\"system\":\"P\",\"component\":\"input\",\"elements\":[\"a\",\"c\"]}\n"
        "{\"t\":1,\"system\":\"C\",\"component\":\"input\",\"elements\":[\"a\",\"c\"]}\n");
  const auto r = run_cli({"locate", "--trace", path("nested.jsonl"), "--system", "P",
                          "--subsystem", "C", "--from", "0", "--to", "1"});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto loc = r.report()["result"]["location"];
  EXPECT_DOUBLE_EQ(loc["input"]["in_core"].get<double>(), 0.5);
  EXPECT_DOUBLE_EQ(loc["input"]["in_periphery"].get<double>(), 0.5);
  EXPECT_TRUE(loc["output"]["in_core"].is_null());

  const auto wrong = run_cli({"locate", "--trace", path("nested.jsonl"), "--system", "C",
                              "--subsystem", "P", "--from", "0", "--to", "1"});
  EXPECT_EQ(wrong.code, cli::kExitValidation);
}

}  // namespace
}  // namespace varietylab
