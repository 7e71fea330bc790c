// Command-line front end: eval, verify, count, bench.

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ostat/ostat.hpp"

namespace {

constexpr int kExitFailure = 1;     // verification disagreement
constexpr int kExitValidation = 2;  // bad input
constexpr int kExitSizeCap = 3;     // a hard work cap was hit

std::optional<ostat::Algorithm> parse_algorithm_flag(const std::string& name) {
  if (name == "auto") return std::nullopt;
  auto a = ostat::parse_algorithm(name);
  if (!a) throw ostat::ValidationError("--algorithm: unknown value '" + name + "'");
  return a;
}

struct EvalArgs {
  std::string spec_path;
  std::string algorithm;
  bool parallel = false;
  std::uint64_t samples = 0;
  std::uint64_t seed = 42;
  std::string output;
};

int cmd_eval(const EvalArgs& args) {
  std::ifstream in(args.spec_path);
  if (!in) throw ostat::ValidationError("spec: cannot open '" + args.spec_path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ostat::ValidationError(std::string("spec: JSON parse error: ") + e.what());
  }
  auto spec = ostat::problem_spec_from_json(j);
  if (!args.algorithm.empty()) spec.algorithm = parse_algorithm_flag(args.algorithm);

  ostat::EvalOptions options;
  options.parallel = args.parallel;
  const auto start = std::chrono::steady_clock::now();
  const auto result = spec.algorithm ? ostat::cdf_with(*spec.algorithm, spec.query, spec.layout, options)
                                     : ostat::cdf_auto(spec.query, spec.layout, options);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  nlohmann::json out = {{"value", result.value.value()},
                        {"algorithm", std::string(ostat::to_string(result.algorithm))},
                        {"term_count", result.term_count},
                        {"elapsed_seconds", elapsed}};
  if (args.samples > 0) {
    const auto mc = ostat::cdf_monte_carlo(spec.query, spec.layout, args.samples, args.seed, {args.parallel, 0});
    out["monte_carlo"] = {{"estimate", mc.estimate.value()},
                          {"std_error", mc.std_error},
                          {"samples", mc.samples},
                          {"seed", mc.seed},
                          {"prng", mc.prng}};
  }
  const std::string text = out.dump(-1, ' ', false, nlohmann::json::error_handler_t::strict);
  if (args.output.empty()) {
    std::cout << text << '\n';
  } else {
    std::ofstream(args.output) << text << '\n';
  }
  return 0;
}

int cmd_verify(const ostat::VerifyConfig& config, bool parallel) {
  ostat::EvalOptions options;
  options.parallel = parallel;
  const auto report = ostat::run_verify(config, ostat::StrategyTable::standard(options));
  std::cout << "verify: max_m=" << config.max_m << " trials=" << config.trials << " seed=" << config.seed
            << " tolerance=" << config.tolerance << '\n';
  std::cout << "pairings checked: " << report.pairings_checked << '\n';
  std::cout << "passed: " << report.pairings_checked - report.failures << '\n';
  std::cout << "failed: " << report.failures << '\n';
  for (const auto& f : report.failure_details) std::cout << "FAIL " << f << '\n';
  if (!report.ok()) {
    std::cout << "replay: ostat verify --max-m " << config.max_m << " --trials " << config.trials << " --seed " << config.seed
              << '\n';
  }
  return report.ok() ? 0 : kExitFailure;
}

int cmd_count(const std::vector<int>& indices, int m) {
  std::cout << ostat::count_nu(indices, m) << '\n';
  return 0;
}

struct BenchArgs {
  std::vector<int> k_values{1, 2, 3};
  int m_min = 4;
  int m_max = 14;
  int n = 1;
  std::vector<std::string> algorithms{"bapat_beg", "two_pop"};
  int repetitions = 3;
  std::string output;
};

int cmd_bench(const BenchArgs& args) {
  ostat::BenchConfig config;
  config.k_values = args.k_values;
  config.m_min = args.m_min;
  config.m_max = args.m_max;
  config.n = args.n;
  config.repetitions = args.repetitions;
  config.algorithms.clear();
  for (const auto& name : args.algorithms) {
    auto a = ostat::parse_algorithm(name);
    if (!a) throw ostat::ValidationError("--algorithms: unknown value '" + name + "'");
    config.algorithms.push_back(*a);
  }

  const auto records = ostat::run_bench(config, [](const std::string& w) { std::cerr << "warning: " << w << '\n'; });

  if (args.output.empty()) {
    ostat::write_bench_csv(std::cout, records, ostat::bench_metadata(config));
  } else {
    std::ofstream out(args.output);
    if (!out) throw ostat::ValidationError("--output: cannot open '" + args.output + "'");
    ostat::write_bench_csv(out, records, ostat::bench_metadata(config));
  }

  // Log-log slopes of time against m, for qualitative comparison only.
  std::map<std::pair<int, std::string>, std::pair<std::vector<double>, std::vector<double>>> series;
  for (const auto& r : records) {
    auto& s = series[{r.k, std::string(ostat::to_string(r.algorithm))}];
    s.first.push_back(r.m);
    s.second.push_back(r.wall_time_seconds);
  }
  for (const auto& [key, xy] : series) {
    if (xy.first.size() < 2) continue;
    std::cerr << "slope k=" << key.first << " " << key.second << ": log(time)/log(m) = "
              << ostat::loglog_slope(xy.first, xy.second) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact joint CDFs of order statistics from one, two, or many populations"};
  app.require_subcommand(1);

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Evaluate the joint CDF described by a JSON problem spec");
  eval->add_option("spec", eval_args.spec_path, "Problem spec JSON file")->required();
  eval->add_option("--algorithm", eval_args.algorithm, "auto|bapat_beg|single_pop|two_pop|multi_pop (overrides the spec)");
  eval->add_flag("--parallel", eval_args.parallel, "Partition the summation across threads");
  eval->add_option("--samples", eval_args.samples, "Also report a Monte Carlo estimate with this many samples");
  eval->add_option("--seed", eval_args.seed, "Monte Carlo seed");
  eval->add_option("--output", eval_args.output, "Write the JSON result here instead of stdout");

  ostat::VerifyConfig verify_config;
  bool verify_parallel = false;
  auto* verify = app.add_subcommand("verify", "Randomized cross-strategy and oracle agreement suite");
  verify->add_option("--max-m", verify_config.max_m, "Largest sample size (<= 8)");
  verify->add_option("--trials", verify_config.trials, "Number of random configurations");
  verify->add_option("--seed", verify_config.seed, "Seed");
  verify->add_flag("--parallel", verify_parallel, "Use the parallel summation mode");

  std::vector<int> count_indices;
  int count_m = 0;
  auto* count = app.add_subcommand("count", "Print the number of Bapat-Beg permanents nu(indices; m)");
  count->add_option("--m", count_m, "Sample size m")->required();
  count->add_option("indices,--indices", count_indices, "Indices n_1 < ... < n_k")->required();

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "Time bapat_beg against the specialized formulas and write CSV");
  bench->add_option("--k", bench_args.k_values, "k values")->delimiter(',');
  bench->add_option("--m-min", bench_args.m_min, "Smallest m");
  bench->add_option("--m-max", bench_args.m_max, "Largest m");
  bench->add_option("--n", bench_args.n, "Size of the first population");
  bench->add_option("--algorithms", bench_args.algorithms, "Algorithms to time")->delimiter(',');
  bench->add_option("--repetitions", bench_args.repetitions, "Timed repetitions per cell (>= 3)");
  bench->add_option("--output", bench_args.output, "CSV output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*eval) return cmd_eval(eval_args);
    if (*verify) return cmd_verify(verify_config, verify_parallel);
    if (*count) return cmd_count(count_indices, count_m);
    if (*bench) return cmd_bench(bench_args);
  } catch (const ostat::SizeCapError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSizeCap;
  } catch (const ostat::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitValidation;
}
