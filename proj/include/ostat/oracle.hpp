#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "ostat/distributions.hpp"
#include "ostat/error.hpp"
#include "ostat/query.hpp"
#include "ostat/rng.hpp"
#include "ostat/summation.hpp"

// Ground-truth computations that share no combinatorial machinery with the
// formulas: both work directly on sorted outcome vectors.

namespace ostat {

inline constexpr std::uint64_t kExhaustiveOutcomeCap = 10'000'000;
inline constexpr std::uint64_t kMonteCarloMinSamples = 1000;

namespace detail {

/// True iff the sorted sample satisfies Y_{n_j} <= y_j for every j.
inline bool event_holds(std::span<const double> sorted, const OrderStatQuery& query) {
  const auto idx = query.indices();
  const auto ys = query.thresholds();
  for (std::size_t j = 0; j < idx.size(); ++j) {
    if (!(ExtendedReal(sorted[static_cast<std::size_t>(idx[j] - 1)]) <= ys[j])) return false;
  }
  return true;
}

}  // namespace detail

/// Exact CDF by enumerating every joint outcome of independent discrete
/// variables (point masses count as one-point discrete laws).
inline Probability cdf_exhaustive_discrete(const OrderStatQuery& query, std::span<const Distribution> dists) {
  if (static_cast<int>(dists.size()) != query.m()) {
    throw DimensionError("cdf_exhaustive_discrete: query has m=" + std::to_string(query.m()) + " but " +
                         std::to_string(dists.size()) + " distributions were given");
  }
  std::vector<std::vector<double>> support;
  std::vector<std::vector<double>> probs;
  std::uint64_t outcomes = 1;
  for (const auto& d : dists) {
    auto [s, p] = d.discrete_table();
    outcomes *= s.size();
    if (outcomes > kExhaustiveOutcomeCap) {
      throw SizeCapError("cdf_exhaustive_discrete joint outcome count", outcomes, kExhaustiveOutcomeCap);
    }
    support.push_back(std::move(s));
    probs.push_back(std::move(p));
  }

  const std::size_t m = dists.size();
  std::vector<std::size_t> digit(m, 0);
  std::vector<double> values(m);
  NeumaierSum<double> total;
  for (std::uint64_t o = 0; o < outcomes; ++o) {
    double p = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      values[i] = support[i][digit[i]];
      p *= probs[i][digit[i]];
    }
    std::sort(values.begin(), values.end());
    if (detail::event_holds(values, query)) total += p;
    for (std::size_t i = 0; i < m; ++i) {
      if (++digit[i] < support[i].size()) break;
      digit[i] = 0;
    }
  }
  return Probability::clamped(total.value());
}

struct MonteCarloEstimate {
  Probability estimate;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::string prng{Rng::algorithm};
};

struct MonteCarloOptions {
  bool parallel = false;
  unsigned threads = 0;
};

/// Frequency estimate of the event from `samples` iid replicates.
///
/// Replicates are drawn in fixed blocks, each from its own generator seeded
/// by (seed, block index), so the result does not depend on thread count.
inline MonteCarloEstimate cdf_monte_carlo(const OrderStatQuery& query, const PopulationLayout& layout,
                                          std::uint64_t samples, std::uint64_t seed,
                                          const MonteCarloOptions& options = {}) {
  if (samples < kMonteCarloMinSamples) {
    throw DomainError("cdf_monte_carlo: samples must be >= " + std::to_string(kMonteCarloMinSamples));
  }
  if (layout.total() != query.m()) {
    throw DimensionError("cdf_monte_carlo: layout has " + std::to_string(layout.total()) +
                         " variables but the query has m=" + std::to_string(query.m()));
  }
  constexpr std::uint64_t kBlock = 4096;
  const auto dists = layout.flattened();
  const std::uint64_t blocks = (samples + kBlock - 1) / kBlock;

  auto run_block = [&](std::uint64_t b, std::vector<double>& values) {
    Rng rng(derive_seed(seed, b));
    const std::uint64_t begin = b * kBlock;
    const std::uint64_t end = std::min(samples, begin + kBlock);
    std::uint64_t hits = 0;
    for (std::uint64_t r = begin; r < end; ++r) {
      for (std::size_t i = 0; i < dists.size(); ++i) values[i] = dists[i].sample(rng);
      std::sort(values.begin(), values.end());
      if (detail::event_holds(values, query)) ++hits;
    }
    return hits;
  };

  unsigned threads = 1;
  if (options.parallel) threads = options.threads != 0 ? options.threads : std::max(1U, std::thread::hardware_concurrency());

  std::uint64_t hits = 0;
  if (threads <= 1) {
    std::vector<double> values(dists.size());
    for (std::uint64_t b = 0; b < blocks; ++b) hits += run_block(b, values);
  } else {
    std::vector<std::uint64_t> partial(threads, 0);
    {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
          std::vector<double> values(dists.size());
          for (std::uint64_t b = t; b < blocks; b += threads) partial[t] += run_block(b, values);
        });
      }
    }
    for (auto h : partial) hits += h;
  }

  MonteCarloEstimate out;
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  out.estimate = Probability::clamped(p);
  out.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
  out.samples = samples;
  out.seed = seed;
  return out;
}

}  // namespace ostat
