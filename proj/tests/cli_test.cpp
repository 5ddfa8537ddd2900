#include "koutcube/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "koutcube/experiments.hpp"
#include "koutcube/sampler.hpp"

using namespace koutcube;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  Result r;
  r.code = cli::dispatch(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("koutcube_cli_test_" + name);
}

}  // namespace

TEST(Cli, ComponentsJsonl) {
  const Result r = call({"components", "--n", "10", "--k", "2", "--trials", "5", "--seed", "7", "--format", "jsonl"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = lines_of(r.out);
  ASSERT_EQ(lines.size(), 5U);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto j = nlohmann::json::parse(lines[i]);
    EXPECT_EQ(j.at("n"), 10);
    EXPECT_EQ(j.at("k"), 2);
    EXPECT_EQ(j.at("trial"), i);
    EXPECT_TRUE(j.at("metrics").contains("component_count"));
  }
}

TEST(Cli, ComponentsCsvSummary) {
  const Result r = call({"components", "--n", "6", "--k", "1", "--trials", "20", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = lines_of(r.out);
  ASSERT_EQ(lines.size(), 6U);
  EXPECT_EQ(lines[0], std::string(kSummaryHeader));
}

TEST(Cli, WalkSummary) {
  const Result r = call({"walk", "--n", "40"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_LE(j.at("window_hit_probability").get<double>(), 3.90625e-7);
  EXPECT_TRUE(j.at("window_ok").get<bool>());
}

TEST(Cli, WalkCsvDistribution) {
  const Result r = call({"walk", "--n", "4", "--horizon", "6", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = lines_of(r.out);
  EXPECT_EQ(lines[0], "step,state,mass");
  EXPECT_EQ(lines[1], "0,0,1");
  EXPECT_EQ(lines[2], "1,1,1");
}

TEST(Cli, WalkMonteCarlo) {
  const Result r = call({"walk", "--n", "10", "--horizon", "10", "--runs", "2000", "--seed", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j.at("return_to_origin").size(), 5U);
}

TEST(Cli, KconnRefusesLargeCube) {
  const Result r = call({"kconn", "--n", "20", "--k", "3", "--trials", "1"});
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("4096"), std::string::npos);
  EXPECT_EQ(lines_of(r.err).size(), 1U);
}

TEST(Cli, KconnSmallCube) {
  const Result r = call({"kconn", "--n", "6", "--k", "3", "--trials", "3", "--seed", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const auto& line : lines_of(r.out)) {
    const auto m = nlohmann::json::parse(line).at("metrics");
    if (m.at("connected") == 1) { EXPECT_GE(m.at("kappa").get<int>(), 1); }
  }
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(call({}).code, 2);
  EXPECT_EQ(call({"frobnicate"}).code, 2);
  const Result unknown = call({"components", "--n", "4", "--bogus", "1"});
  EXPECT_EQ(unknown.code, 2);
  EXPECT_EQ(lines_of(unknown.err).size(), 1U);
  EXPECT_EQ(call({"components", "--n", "4", "--k", "5"}).code, 2);
  EXPECT_EQ(call({"components", "--n", "4", "--trials", "0"}).code, 2);
  EXPECT_EQ(call({"components", "--n", "4", "--format", "xml"}).code, 2);
  EXPECT_EQ(call({"walk"}).code, 2);
  EXPECT_EQ(call({"cut-census", "--n", "4", "--k", "1"}).code, 2);
  EXPECT_EQ(call({"cut-census", "--n", "4", "--k", "2", "--removal", "1,x"}).code, 2);
  EXPECT_EQ(call({"cut-census", "--n", "4", "--k", "2", "--cap", "13"}).code, 1);
}

TEST(Cli, HelpExitsZero) {
  const Result r = call({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("components"), std::string::npos);
}

TEST(Cli, GoldenStabilityAndSeedHonored) {
  const std::vector<std::vector<std::string>> commands = {
      {"components", "--n", "8", "--k", "1", "--trials", "4"},
      {"cycles", "--n", "8", "--trials", "4"},
      {"kconn", "--n", "5", "--k", "2", "--trials", "4"},
      {"cut-census", "--n", "5", "--k", "2", "--trials", "2", "--cap", "4"},
      {"subcube-scan", "--n", "6", "--k", "1", "--trials", "4"},
      {"walk", "--n", "6", "--runs", "50"},
      {"iso-check", "--n", "8", "--samples", "50"},
      {"sweep", "--n", "4", "--k-max", "2", "--trials", "20"},
  };
  for (const auto& base : commands) {
    auto with_seed = [&](const std::string& seed) {
      auto args = base;
      args.push_back("--seed");
      args.push_back(seed);
      return call(args);
    };
    const Result a = with_seed("11");
    const Result b = with_seed("11");
    const Result c = with_seed("12");
    ASSERT_EQ(a.code, 0) << base[0] << ": " << a.err;
    EXPECT_EQ(a.out, b.out) << base[0];
    EXPECT_NE(a.out, c.out) << base[0];
  }
}

TEST(Cli, ThreadsFlagDoesNotChangeOutput) {
  const Result one = call({"components", "--n", "9", "--k", "2", "--trials", "40", "--threads", "1"});
  const Result four = call({"components", "--n", "9", "--k", "2", "--trials", "40", "--threads", "4"});
  EXPECT_EQ(one.out, four.out);
}

TEST(Cli, SampleFileRoundTrip) {
  const auto path = temp_path("sample.bin");
  const Result w = call({"sample", "--n", "7", "--k", "2", "--seed", "5", "--out", path.string()});
  ASSERT_EQ(w.code, 0) << w.err;
  std::ifstream in(path, std::ios::binary);
  const LoadedSample loaded = read_sample(in);
  EXPECT_EQ(loaded.seed, 5U);
  EXPECT_EQ(loaded.sample, trial_sample(Dimension(7), 2, 5));

  const Result c = call({"components", "--input", path.string()});
  ASSERT_EQ(c.code, 0) << c.err;
  const auto j = nlohmann::json::parse(c.out);
  EXPECT_EQ(j.at("seed"), 5);
  EXPECT_EQ(j.at("n"), 7);
  std::filesystem::remove(path);

  EXPECT_EQ(call({"components", "--input", temp_path("missing.bin").string()}).code, 1);
}

TEST(Cli, SummarizeFromFile) {
  const auto path = temp_path("records.jsonl");
  const Result w = call({"cycles", "--n", "6", "--trials", "12", "--out", path.string()});
  ASSERT_EQ(w.code, 0) << w.err;
  const Result s = call({"summarize", "--input", path.string()});
  ASSERT_EQ(s.code, 0) << s.err;
  const auto lines = lines_of(s.out);
  ASSERT_EQ(lines.size(), 5U);
  EXPECT_EQ(lines[0], std::string(kSummaryHeader));
  EXPECT_EQ(lines[1].rfind("6,1,component_count,", 0), 0U);
  std::filesystem::remove(path);
}

TEST(Cli, SubcubeScanFindsPlantedCube) {
  const Result r = call({"subcube-scan", "--n", "8", "--k", "3", "--trials", "5", "--plant", "--level", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const auto& line : lines_of(r.out)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_TRUE(j.at("planted_found").get<bool>());
    EXPECT_FALSE(j.at("connected").get<bool>());
    EXPECT_EQ(j.at("planted").at("level"), 2);
  }
}

TEST(Cli, CutCensusWithRemoval) {
  const Result r = call({"cut-census", "--n", "3", "--k", "3", "--removal", "1,2,4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  // Q^3(3) is the full cube: removing N(0) isolates 0.
  EXPECT_EQ(j.at("sets").at(0), nlohmann::json::array({0}));
  EXPECT_EQ(j.at("set_count"), 2);
}

TEST(Cli, IsoCheckReport) {
  const Result r = call({"iso-check", "--n", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("sets_checked"), 65535);
  EXPECT_EQ(j.at("violations"), 0);
}

TEST(Cli, SweepCsv) {
  const Result r = call({"sweep", "--n", "5", "--k-min", "2", "--trials", "10", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = lines_of(r.out);
  ASSERT_EQ(lines.size(), 5U);
  EXPECT_EQ(lines[0], "n,k,k0,k1,trials,connected,rate,wilson_lo,wilson_hi");
  EXPECT_EQ(lines[4].rfind("5,5,", 0), 0U);
}
