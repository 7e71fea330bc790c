#pragma once

// Random problem generators shared by the unit and acceptance suites.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "ostat/ostat.hpp"

namespace ostat::testing {

inline int uniform_int(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
}

/// Discrete law on a random subset of {0, 1, 2, 3} with `max_support` points at most.
inline Distribution random_discrete(Rng& rng, int max_support = 3) {
  std::vector<double> pool{0.0, 1.0, 2.0, 3.0};
  for (std::size_t i = pool.size(); i > 1; --i) std::swap(pool[i - 1], pool[rng.next_u64() % i]);
  const int size = uniform_int(rng, 1, max_support);
  std::vector<double> support(pool.begin(), pool.begin() + size);
  std::sort(support.begin(), support.end());
  std::vector<double> probs(support.size());
  double total = 0.0;
  for (auto& p : probs) total += (p = 0.05 + rng.uniform01());
  for (auto& p : probs) p /= total;
  return Distribution::discrete(std::move(support), std::move(probs));
}

/// Any kind, parameters drawn so that mass lands around [-1, 3].
inline Distribution random_distribution(Rng& rng) {
  switch (uniform_int(rng, 0, 4)) {
    case 0: {
      const double a = -1.0 + 2.0 * rng.uniform01();
      return Distribution::uniform(a, a + 0.5 + 2.0 * rng.uniform01());
    }
    case 1: return Distribution::exponential(0.3 + 2.0 * rng.uniform01());
    case 2: return Distribution::standard_normal();
    case 3: return random_discrete(rng, 3);
    default: return Distribution::point_mass(std::round(4.0 * rng.uniform01() * 4.0) / 4.0 - 0.5);
  }
}

inline Distribution random_continuous(Rng& rng) {
  switch (uniform_int(rng, 0, 2)) {
    case 0: {
      const double a = -1.0 + 2.0 * rng.uniform01();
      return Distribution::uniform(a, a + 0.5 + 2.0 * rng.uniform01());
    }
    case 1: return Distribution::exponential(0.3 + 2.0 * rng.uniform01());
    default: return Distribution::standard_normal();
  }
}

/// Sorted random thresholds in [-1.5, 3.5], on a quarter grid so that ties
/// with discrete support points and between thresholds occur.
inline std::vector<ExtendedReal> random_thresholds(Rng& rng, int k) {
  std::vector<double> ys(static_cast<std::size_t>(k));
  for (auto& y : ys) y = -1.5 + 0.25 * uniform_int(rng, 0, 20);
  std::sort(ys.begin(), ys.end());
  return {ys.begin(), ys.end()};
}

inline std::vector<int> random_indices(Rng& rng, int k, int m) {
  std::vector<int> pool(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) pool[static_cast<std::size_t>(i)] = i + 1;
  for (std::size_t i = pool.size(); i > 1; --i) std::swap(pool[i - 1], pool[rng.next_u64() % i]);
  std::vector<int> out(pool.begin(), pool.begin() + k);
  std::sort(out.begin(), out.end());
  return out;
}

inline OrderStatQuery random_query(Rng& rng, int m, int max_k = 3) {
  const int k = uniform_int(rng, 1, std::min(max_k, m));
  return OrderStatQuery(random_indices(rng, k, m), random_thresholds(rng, k), m);
}

/// Random composition of m into `parts` positive sizes.
inline std::vector<int> random_sizes(Rng& rng, int m, int parts) {
  std::vector<int> sizes(static_cast<std::size_t>(parts), 1);
  for (int extra = m - parts; extra > 0; --extra) ++sizes[rng.next_u64() % sizes.size()];
  return sizes;
}

template <typename MakeDist>
PopulationLayout random_layout(Rng& rng, int m, int populations, MakeDist&& make) {
  std::vector<PopulationLayout::Group> groups;
  for (int s : random_sizes(rng, m, populations)) groups.push_back({s, make(rng)});
  return PopulationLayout(std::move(groups));
}

/// Independent iid oracle for k = 1: P(Y_n <= y) = sum_{i >= n} binom(m,i) F^i (1-F)^(m-i).
inline double iid_single_order_stat(int m, int n, double F) {
  double total = 0.0;
  for (int i = n; i <= m; ++i) {
    double binom = 1.0;
    for (int t = 1; t <= i; ++t) binom = binom * (m - i + t) / t;
    total += binom * std::pow(F, i) * std::pow(1.0 - F, m - i);
  }
  return total;
}

}  // namespace ostat::testing
