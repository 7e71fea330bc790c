#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "ostat/distributions.hpp"
#include "ostat/error.hpp"
#include "ostat/orderstats.hpp"
#include "ostat/query.hpp"

namespace ostat {

struct BenchRecord {
  int m = 0;
  int k = 0;
  int n = 0;
  Algorithm algorithm = Algorithm::bapat_beg;
  double wall_time_seconds = 0.0;
  std::uint64_t term_count = 0;
  double value = 0.0;
};

struct BenchConfig {
  std::vector<int> k_values{1, 2, 3};
  int m_min = 4;
  int m_max = 14;
  int n = 1;
  std::vector<Algorithm> algorithms{Algorithm::bapat_beg, Algorithm::two_pop};
  int repetitions = 3;
  /// Each repetition repeats the evaluation until at least this much time
  /// has passed and reports the per-call time.
  double min_sample_seconds = 2e-3;
};

inline constexpr const char* kBenchCsvHeader = "m,k,n,algorithm,wall_time_seconds,term_count,value";

/// The fixed benchmark problem: the first n variables uniform(0,1), the
/// remaining m - n exponential(rate 2), thresholds y_j = j / (k + 1).
inline PopulationLayout bench_layout(int m, int n) {
  if (n == m) return PopulationLayout::iid(m, Distribution::uniform(0.0, 1.0));
  if (n == 0) return PopulationLayout::iid(m, Distribution::exponential(2.0));
  return PopulationLayout({{n, Distribution::uniform(0.0, 1.0)}, {m - n, Distribution::exponential(2.0)}});
}

inline OrderStatQuery bench_query(int m, int k) {
  std::vector<int> indices(static_cast<std::size_t>(k));
  std::vector<ExtendedReal> ys;
  for (int j = 1; j <= k; ++j) {
    indices[static_cast<std::size_t>(j - 1)] = j;
    ys.emplace_back(static_cast<double>(j) / (k + 1));
  }
  return OrderStatQuery(std::move(indices), std::move(ys), m);
}

inline std::vector<std::string> bench_metadata(const BenchConfig& c) {
  return {
      "first population (n variables): uniform(0,1); second population (m-n variables): exponential(rate=2)",
      "thresholds: y_j = j/(k+1), j = 1..k; indices 1..k",
      "timing: steady_clock, one warmup discarded, median of " + std::to_string(c.repetitions) +
          " repetitions, each repeated until >= " + std::to_string(c.min_sample_seconds) + " s and divided by call count",
  };
}

/// Seconds per call: median over repetitions, after one discarded warmup.
template <typename Fn>
double time_median(Fn&& fn, int repetitions, double min_sample_seconds) {
  using clock = std::chrono::steady_clock;
  fn();
  std::vector<double> samples;
  for (int r = 0; r < std::max(3, repetitions); ++r) {
    std::uint64_t calls = 0;
    const auto start = clock::now();
    double elapsed = 0.0;
    do {
      fn();
      ++calls;
      elapsed = std::chrono::duration<double>(clock::now() - start).count();
    } while (elapsed < min_sample_seconds);
    samples.push_back(elapsed / static_cast<double>(calls));
  }
  std::sort(samples.begin(), samples.end());
  return samples[samples.size() / 2];
}

/// Runs the sweep over (k, m, algorithm). Cells that break a strategy cap
/// or are not applicable are skipped and reported through `warn`.
inline std::vector<BenchRecord> run_bench(const BenchConfig& config,
                                          const std::function<void(const std::string&)>& warn = {}) {
  if (config.m_min < 1 || config.m_max < config.m_min) throw DomainError("bench: invalid m range");
  if (config.n < 0 || config.n > config.m_min) throw DomainError("bench: n must be in [0, m_min]");
  std::vector<BenchRecord> out;
  for (int k : config.k_values) {
    for (int m = config.m_min; m <= config.m_max; ++m) {
      if (k < 1 || k > m) {
        if (warn) warn("skip k=" + std::to_string(k) + " m=" + std::to_string(m) + ": k must be in [1, m]");
        continue;
      }
      const auto layout = bench_layout(m, config.n);
      const auto query = bench_query(m, k);
      for (Algorithm alg : config.algorithms) {
        try {
          EvalResult result = cdf_with(alg, query, layout);
          const double t = time_median([&] { result = cdf_with(alg, query, layout); }, config.repetitions,
                                       config.min_sample_seconds);
          out.push_back({m, k, config.n, alg, t, result.term_count, result.value.value()});
        } catch (const SizeCapError& e) {
          if (warn) warn("skip k=" + std::to_string(k) + " m=" + std::to_string(m) + " " + std::string(to_string(alg)) + ": " + e.what());
        } catch (const DomainError& e) {
          if (warn) warn("skip k=" + std::to_string(k) + " m=" + std::to_string(m) + " " + std::string(to_string(alg)) + ": " + e.what());
        }
      }
    }
  }
  return out;
}

inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_bench_csv(std::ostream& os, const std::vector<BenchRecord>& records,
                            const std::vector<std::string>& metadata = {}) {
  for (const auto& line : metadata) os << "# " << line << '\n';
  os << kBenchCsvHeader << '\n';
  for (const auto& r : records) {
    os << r.m << ',' << r.k << ',' << r.n << ',' << to_string(r.algorithm) << ',' << format_g17(r.wall_time_seconds) << ','
       << r.term_count << ',' << format_g17(r.value) << '\n';
  }
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("loglog_slope: need >= 2 paired points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace ostat
