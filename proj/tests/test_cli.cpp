#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "ostat/ostat.hpp"

using namespace ostat;
using nlohmann::json;

namespace {

std::string spec_error(const char* text) {
  try {
    problem_spec_from_json(json::parse(text));
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "no error";
}

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(OSTAT_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe)) out += buf;
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path.string();
}

constexpr const char* kTwoPopSpec = R"({
  "populations": [
    {"size": 3, "dist": {"kind": "uniform", "a": 0, "b": 1}},
    {"size": 3, "dist": {"kind": "exponential", "rate": 1}}
  ],
  "query": {"indices": [1, 3], "thresholds": [0.4, 0.9]}
})";

}  // namespace

TEST(ProblemSpec, ParsesAndRoundTrips) {
  const auto spec = problem_spec_from_json(json::parse(kTwoPopSpec));
  EXPECT_EQ(spec.layout.total(), 6);
  EXPECT_EQ(spec.layout.populations(), 2);
  EXPECT_EQ(spec.query.k(), 2);
  EXPECT_FALSE(spec.algorithm.has_value());
  const auto back = problem_spec_from_json(to_json(spec));
  EXPECT_EQ(to_json(back), to_json(spec));
}

TEST(ProblemSpec, InfiniteThresholdsAndAlgorithm) {
  const auto spec = problem_spec_from_json(json::parse(R"({
    "populations": [{"size": 2, "dist": {"kind": "standard_normal"}}],
    "query": {"indices": [1, 2], "thresholds": ["-inf", "+inf"]},
    "algorithm": "bapat_beg"})"));
  EXPECT_TRUE(spec.query.thresholds()[0].is_neg_inf());
  EXPECT_TRUE(spec.query.thresholds()[1].is_pos_inf());
  EXPECT_EQ(spec.algorithm, Algorithm::bapat_beg);
  EXPECT_EQ(cdf_with(*spec.algorithm, spec.query, spec.layout).value.value(), 0.0);
}

TEST(ProblemSpec, ErrorsNameTheField) {
  EXPECT_NE(spec_error(R"({"query": {}})").find("populations"), std::string::npos);
  EXPECT_NE(spec_error(R"({"populations": [{"size": 0, "dist": {"kind": "standard_normal"}}], "query": {"indices": [1], "thresholds": [0]}})")
                .find("populations[0].size"),
            std::string::npos);
  EXPECT_NE(spec_error(R"({"populations": [{"size": 1, "dist": {"kind": "uniform", "a": 1}}], "query": {"indices": [1], "thresholds": [0]}})")
                .find("populations[0].dist"),
            std::string::npos);
  EXPECT_NE(spec_error(R"({"populations": [{"size": 2, "dist": {"kind": "standard_normal"}}], "query": {"indices": [1, 1.5], "thresholds": [0, 1]}})")
                .find("query.indices[1]"),
            std::string::npos);
  EXPECT_NE(spec_error(R"({"populations": [{"size": 2, "dist": {"kind": "standard_normal"}}], "query": {"indices": [1], "thresholds": ["x"]}})")
                .find("query.thresholds[0]"),
            std::string::npos);
  EXPECT_NE(spec_error(R"({"populations": [{"size": 2, "dist": {"kind": "standard_normal"}}], "query": {"indices": [3], "thresholds": [0]}})")
                .find("query"),
            std::string::npos);
  EXPECT_NE(spec_error(R"({"populations": [{"size": 2, "dist": {"kind": "standard_normal"}}], "query": {"indices": [1], "thresholds": [0]}, "algorithm": "fast"})")
                .find("algorithm"),
            std::string::npos);
}

TEST(Verify, StandardStrategiesPass) {
  VerifyConfig config;
  config.trials = 60;
  const auto report = run_verify(config);
  EXPECT_TRUE(report.ok()) << (report.failure_details.empty() ? "" : report.failure_details.front());
  EXPECT_EQ(report.pairings_checked, 240u);
}

TEST(Verify, SmallestConfiguration) {
  VerifyConfig config;
  config.max_m = 2;
  config.trials = 1;
  config.seed = 0;
  const auto report = run_verify(config);
  EXPECT_EQ(report.pairings_checked, 4u);
  EXPECT_TRUE(report.ok());
  config.max_m = 1;
  EXPECT_THROW(run_verify(config), DomainError);
  config.max_m = 9;
  EXPECT_THROW(run_verify(config), DomainError);
}

TEST(Verify, DetectsBrokenStrategy) {
  auto table = StrategyTable::standard();
  table.two_pop = [](const OrderStatQuery& q, const Distribution& f, const Distribution& g, int n) {
    auto r = cdf_two_populations(q, f, g, n);
    r.raw_value *= q.m() - n + 1;
    return r;
  };
  VerifyConfig config;
  config.trials = 30;
  const auto report = run_verify(config, table);
  EXPECT_FALSE(report.ok());
  ASSERT_FALSE(report.failure_details.empty());
  EXPECT_NE(report.failure_details.front().find("two_pop vs exhaustive"), std::string::npos);
  EXPECT_NE(report.failure_details.front().find("seed 42"), std::string::npos);
}

TEST(Bench, SmallSweep) {
  BenchConfig config;
  config.k_values = {1, 2};
  config.m_min = 4;
  config.m_max = 7;
  config.repetitions = 3;
  config.min_sample_seconds = 1e-4;
  const auto records = run_bench(config);
  ASSERT_EQ(records.size(), 2u * 4u * 2u);
  for (std::size_t i = 0; i + 1 < records.size(); i += 2) {
    const auto& bb = records[i];
    const auto& two = records[i + 1];
    ASSERT_EQ(bb.algorithm, Algorithm::bapat_beg);
    ASSERT_EQ(two.algorithm, Algorithm::two_pop);
    EXPECT_EQ(CountValue(bb.term_count), count_nu(bench_query(bb.m, bb.k).indices(), bb.m));
    EXPECT_NEAR(bb.value, two.value, 1e-12);
    EXPECT_GT(bb.wall_time_seconds, 0.0);
  }

  std::ostringstream os;
  write_bench_csv(os, records, bench_metadata(config));
  std::istringstream in(os.str());
  std::string line;
  int data_lines = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!header_seen) {
      if (line.rfind("# ", 0) == 0) continue;
      EXPECT_EQ(line, kBenchCsvHeader);
      header_seen = true;
      continue;
    }
    ++data_lines;
  }
  EXPECT_TRUE(header_seen);
  EXPECT_EQ(data_lines, static_cast<int>(records.size()));
}

TEST(Bench, SlopeOfPowerLaw) {
  EXPECT_NEAR(loglog_slope({2, 4, 8, 16}, {3, 12, 48, 192}), 2.0, 1e-12);
}

TEST(Cli, EvalPrintsJson) {
  const auto path = write_temp("ostat_cli_two_pop.json", kTwoPopSpec);
  const auto r = run_cli("eval " + path);
  ASSERT_EQ(r.exit_code, 0);
  const auto j = json::parse(r.out);
  EXPECT_NEAR(j.at("value").get<double>(), 0.9163532173553111, 1e-13);
  EXPECT_EQ(j.at("algorithm"), "two_pop");
  EXPECT_TRUE(j.contains("term_count"));
  EXPECT_TRUE(j.contains("elapsed_seconds"));

  const auto bb = json::parse(run_cli("eval " + path + " --algorithm bapat_beg").out);
  EXPECT_NEAR(bb.at("value").get<double>(), j.at("value").get<double>(), 1e-12);

  const auto mc = json::parse(run_cli("eval " + path + " --samples 20000 --seed 5").out);
  EXPECT_EQ(mc.at("monte_carlo").at("samples"), 20000);
  EXPECT_EQ(mc.at("monte_carlo").at("prng").get<std::string>(), std::string(Rng::algorithm));
}

TEST(Cli, CountAndVerify) {
  auto r = run_cli("count --m 10 1 2 3 4 5 6 7 8 9 10");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, "16796\n");
  r = run_cli("verify --max-m 5 --trials 20 --seed 3");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("pairings checked: 80"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  const auto bad = write_temp("ostat_cli_bad.json", R"({"populations": [], "query": {}})");
  EXPECT_EQ(run_cli("eval " + bad).exit_code, 2);
  EXPECT_EQ(run_cli("eval /nonexistent/spec.json").exit_code, 2);
  const auto big = write_temp("ostat_cli_big.json", R"({
    "populations": [{"size": 25, "dist": {"kind": "uniform", "a": 0, "b": 1}}],
    "query": {"indices": [3], "thresholds": [0.5]}, "algorithm": "bapat_beg"})");
  EXPECT_EQ(run_cli("eval " + big).exit_code, 3);
  EXPECT_EQ(run_cli("eval " + big + " --algorithm single_pop").exit_code, 0);
  EXPECT_EQ(run_cli("verify --max-m 12").exit_code, 2);
}
