#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "ostat/combinatorics.hpp"
#include "ostat/distributions.hpp"
#include "ostat/error.hpp"
#include "ostat/permanent.hpp"
#include "ostat/query.hpp"
#include "ostat/summation.hpp"

namespace ostat {

enum class Algorithm { bapat_beg, single_pop, two_pop, multi_pop };

inline std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::bapat_beg: return "bapat_beg";
    case Algorithm::single_pop: return "single_pop";
    case Algorithm::two_pop: return "two_pop";
    case Algorithm::multi_pop: return "multi_pop";
  }
  return "unknown";
}

inline std::optional<Algorithm> parse_algorithm(std::string_view s) {
  if (s == "bapat_beg") return Algorithm::bapat_beg;
  if (s == "single_pop") return Algorithm::single_pop;
  if (s == "two_pop") return Algorithm::two_pop;
  if (s == "multi_pop") return Algorithm::multi_pop;
  return std::nullopt;
}

struct EvalResult {
  Probability value;
  double raw_value = 0.0;  // before clamping to [0, 1]
  std::uint64_t term_count = 0;
  Algorithm algorithm = Algorithm::bapat_beg;
};

struct EvalOptions {
  /// Partition the index stream across threads. Results can differ from the
  /// sequential order in the last bits (<= 1e-10 relative).
  bool parallel = false;
  /// Thread count for parallel mode; 0 means hardware concurrency.
  unsigned threads = 0;
};

namespace detail {

inline constexpr int kExactFactorialMax = 20;

inline constexpr std::array<std::uint64_t, kExactFactorialMax + 1> kFactorials = [] {
  std::array<std::uint64_t, kExactFactorialMax + 1> f{};
  f[0] = 1;
  for (std::size_t i = 1; i < f.size(); ++i) f[i] = f[i - 1] * i;
  return f;
}();

/// total! / prod(parts!) exactly; requires total <= 20 and sum(parts) <= total.
inline std::uint64_t multinomial_exact(int total, std::span<const int> parts) {
  std::uint64_t r = kFactorials[static_cast<std::size_t>(total)];
  for (int p : parts) r /= kFactorials[static_cast<std::size_t>(p)];
  return r;
}

/// Same coefficient as a product of binomial ratios in floating point.
inline double multinomial_ratio(int total, std::span<const int> parts) {
  double r = 1.0;
  int placed = 0;
  for (int p : parts) {
    for (int t = 1; t <= p; ++t) r *= static_cast<double>(placed + t) / t;
    placed += p;
  }
  // Parts summing to less than total leave (total - placed)! in the numerator.
  for (int t = placed + 1; t <= total; ++t) r *= t;
  return r;
}

inline double factorial_product(std::span<const int> parts) {
  double r = 1.0;
  for (int p : parts) {
    if (p <= kExactFactorialMax) {
      r *= static_cast<double>(kFactorials[static_cast<std::size_t>(p)]);
    } else {
      for (int t = 2; t <= p; ++t) r *= t;
    }
  }
  return r;
}

/// Interval masses Delta_j = F(y_j) - F(y_{j-1}) for j = 1..k+1.
inline std::vector<double> interval_masses(const OrderStatQuery& query, const Distribution& d) {
  const int k = query.k();
  std::vector<double> c(static_cast<std::size_t>(k + 2));
  for (int j = 0; j <= k + 1; ++j) c[static_cast<std::size_t>(j)] = d.cdf(query.threshold_with_sentinels(j));
  std::vector<double> delta(static_cast<std::size_t>(k + 1));
  for (int j = 1; j <= k + 1; ++j) {
    delta[static_cast<std::size_t>(j - 1)] = std::max(0.0, c[static_cast<std::size_t>(j)] - c[static_cast<std::size_t>(j - 1)]);
  }
  return delta;
}

/// powers[j][e] = delta[j]^e for e = 0..max_exp, with 0^0 = 1.
inline std::vector<std::vector<double>> power_table(std::span<const double> delta, int max_exp) {
  std::vector<std::vector<double>> out(delta.size(), std::vector<double>(static_cast<std::size_t>(max_exp + 1)));
  for (std::size_t j = 0; j < delta.size(); ++j) {
    out[j][0] = 1.0;
    for (int e = 1; e <= max_exp; ++e) out[j][static_cast<std::size_t>(e)] = out[j][static_cast<std::size_t>(e - 1)] * delta[j];
  }
  return out;
}

struct PartialSum {
  NeumaierSum<double> sum;
  std::uint64_t terms = 0;
};

/// Sums term(ivec, partial) over the summation set. In parallel mode thread
/// t handles the vectors whose stream ordinal is t modulo the thread count,
/// and partials are merged in thread order.
template <typename TermFn>
PartialSum reduce_index_set(const OrderStatQuery& query, const EvalOptions& options, const TermFn& term) {
  unsigned threads = 1;
  if (options.parallel) threads = options.threads != 0 ? options.threads : std::max(1U, std::thread::hardware_concurrency());

  if (threads <= 1) {
    PartialSum acc;
    for_each_index_vector(query.indices(), query.m(), [&](const IndexVector& v) { term(v, acc); });
    return acc;
  }

  std::vector<PartialSum> partials(threads);
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        IndexVectorStream stream(query.indices(), query.m());
        std::uint64_t ordinal = 0;
        while (stream.next()) {
          if (ordinal++ % threads == t) term(stream.current(), partials[t]);
        }
      });
    }
  }
  PartialSum acc;
  for (const auto& p : partials) {
    acc.sum += p.sum;
    acc.terms += p.terms;
  }
  return acc;
}

inline EvalResult finish(const PartialSum& acc, Algorithm algorithm) {
  EvalResult r;
  r.raw_value = acc.sum.value();
  r.value = Probability::clamped(r.raw_value);
  r.term_count = acc.terms;
  r.algorithm = algorithm;
  return r;
}

inline EvalResult single_population_sum(const OrderStatQuery& query, const Distribution& dist, const EvalOptions& options,
                                        Algorithm tag) {
  const int m = query.m();
  const auto delta = interval_masses(query, dist);
  const auto powers = power_table(delta, m);
  const auto acc = reduce_index_set(query, options, [&](const IndexVector& ivec, PartialSum& out) {
    const auto blocks = ivec.blocks();
    const double coef = m <= kExactFactorialMax ? static_cast<double>(multinomial_exact(m, blocks))
                                                : multinomial_ratio(m, blocks);
    double prod = 1.0;
    for (std::size_t j = 0; j < blocks.size(); ++j) prod *= powers[j][static_cast<std::size_t>(blocks[j])];
    out.sum += coef * prod;
    ++out.terms;
  });
  return finish(acc, tag);
}

}  // namespace detail

/// General Bapat-Beg evaluation: one Ryser permanent of the expanded
/// m x m matrix per index vector, divided by the block-size factorials.
inline EvalResult cdf_bapat_beg(const OrderStatQuery& query, std::span<const Distribution> dists,
                                const EvalOptions& options = {}) {
  if (static_cast<int>(dists.size()) != query.m()) {
    throw DimensionError("cdf_bapat_beg: query has m=" + std::to_string(query.m()) + " but " +
                         std::to_string(dists.size()) + " distributions were given");
  }
  if (dists.size() > kPermanentRyserCap) throw SizeCapError("cdf_bapat_beg permanent order (m)", dists.size(), kPermanentRyserCap);

  const auto acc = detail::reduce_index_set(query, options, [&](const IndexVector& ivec, detail::PartialSum& out) {
    const auto blocks = ivec.blocks();
    out.sum += permanent_ryser(build_bb_matrix(query, dists, ivec)) / detail::factorial_product(blocks);
    ++out.terms;
  });
  return detail::finish(acc, Algorithm::bapat_beg);
}

/// iid case: the multinomial formula over the same index set.
inline EvalResult cdf_single_population(const OrderStatQuery& query, const Distribution& dist,
                                        const EvalOptions& options = {}) {
  return detail::single_population_sum(query, dist, options, Algorithm::single_pop);
}

/// First n variables distributed as f, the remaining m - n as g. Sums over
/// (index vector, allocation vector) pairs; n = 0 and n = m reduce to the
/// iid formula for g and f.
inline EvalResult cdf_two_populations(const OrderStatQuery& query, const Distribution& f, const Distribution& g, int n,
                                      const EvalOptions& options = {}) {
  const int m = query.m();
  if (n < 0 || n > m) throw DomainError("cdf_two_populations: n=" + std::to_string(n) + " outside [0, " + std::to_string(m) + "]");
  if (n == m) return detail::single_population_sum(query, f, options, Algorithm::two_pop);
  if (n == 0) return detail::single_population_sum(query, g, options, Algorithm::two_pop);

  const auto pf = detail::power_table(detail::interval_masses(query, f), m);
  const auto pg = detail::power_table(detail::interval_masses(query, g), m);
  const bool exact = m <= detail::kExactFactorialMax;

  const auto acc = detail::reduce_index_set(query, options, [&](const IndexVector& ivec, detail::PartialSum& out) {
    AllocationVectorStream lambdas(ivec, n);
    const auto caps = lambdas.caps();
    std::vector<int> rest(caps.size());
    while (lambdas.next()) {
      const auto lambda = lambdas.current();
      double prod = 1.0;
      for (std::size_t j = 0; j < caps.size(); ++j) {
        rest[j] = caps[j] - lambda[j];
        prod *= pf[j][static_cast<std::size_t>(lambda[j])] * pg[j][static_cast<std::size_t>(rest[j])];
      }
      const double coef = exact ? static_cast<double>(detail::multinomial_exact(n, lambda) *
                                                      detail::multinomial_exact(m - n, rest))
                                : detail::multinomial_ratio(n, lambda) * detail::multinomial_ratio(m - n, rest);
      out.sum += coef * prod;
      ++out.terms;
    }
  });
  return detail::finish(acc, Algorithm::two_pop);
}

/// N populations of sizes m_s with CDFs G_s. Sums over (index vector,
/// allocation matrix) pairs; each m_s! enters once per term.
inline EvalResult cdf_multi_population(const OrderStatQuery& query, const PopulationLayout& layout,
                                       const EvalOptions& options = {}) {
  const int m = query.m();
  if (layout.total() != m) {
    throw DimensionError("cdf_multi_population: layout has " + std::to_string(layout.total()) +
                         " variables but the query has m=" + std::to_string(m));
  }
  const auto sizes = layout.sizes();
  const auto n_pop = sizes.size();
  std::vector<std::vector<std::vector<double>>> powers;
  powers.reserve(n_pop);
  for (const auto& g : layout.groups()) powers.push_back(detail::power_table(detail::interval_masses(query, g.dist), g.size));
  const bool exact = m <= detail::kExactFactorialMax;

  const auto acc = detail::reduce_index_set(query, options, [&](const IndexVector& ivec, detail::PartialSum& out) {
    AllocationMatrixStream matrices(ivec, sizes);
    const int rows = matrices.row_count();
    std::vector<int> column(static_cast<std::size_t>(rows));
    while (matrices.next()) {
      double prod = 1.0;
      std::uint64_t coef_exact = 1;
      double coef_ratio = 1.0;
      for (std::size_t s = 0; s < n_pop; ++s) {
        for (int j = 0; j < rows; ++j) {
          const int lam = matrices.at(j, static_cast<int>(s));
          column[static_cast<std::size_t>(j)] = lam;
          prod *= powers[s][static_cast<std::size_t>(j)][static_cast<std::size_t>(lam)];
        }
        if (exact) {
          coef_exact *= detail::multinomial_exact(sizes[s], column);
        } else {
          coef_ratio *= detail::multinomial_ratio(sizes[s], column);
        }
      }
      out.sum += (exact ? static_cast<double>(coef_exact) : coef_ratio) * prod;
      ++out.terms;
    }
  });
  return detail::finish(acc, Algorithm::multi_pop);
}

/// Picks the cheapest applicable strategy for the layout.
inline Algorithm auto_algorithm(const PopulationLayout& layout) {
  if (layout.populations() == 1) return Algorithm::single_pop;
  if (layout.populations() == 2) return Algorithm::two_pop;
  if (layout.all_singletons() && layout.total() <= static_cast<int>(kPermanentRyserCap)) return Algorithm::bapat_beg;
  return Algorithm::multi_pop;
}

/// Evaluate with an explicitly chosen strategy on a layout.
inline EvalResult cdf_with(Algorithm algorithm, const OrderStatQuery& query, const PopulationLayout& layout,
                           const EvalOptions& options = {}) {
  if (layout.total() != query.m()) {
    throw DimensionError("layout has " + std::to_string(layout.total()) + " variables but the query has m=" +
                         std::to_string(query.m()));
  }
  const auto groups = layout.groups();
  switch (algorithm) {
    case Algorithm::bapat_beg: {
      const auto dists = layout.flattened();
      return cdf_bapat_beg(query, dists, options);
    }
    case Algorithm::single_pop:
      if (layout.populations() != 1) throw DomainError("single_pop requires exactly one population");
      return cdf_single_population(query, groups[0].dist, options);
    case Algorithm::two_pop:
      if (layout.populations() == 1) return cdf_two_populations(query, groups[0].dist, groups[0].dist, query.m(), options);
      if (layout.populations() != 2) throw DomainError("two_pop requires one or two populations");
      return cdf_two_populations(query, groups[0].dist, groups[1].dist, groups[0].size, options);
    case Algorithm::multi_pop:
      return cdf_multi_population(query, layout, options);
  }
  throw DomainError("unknown algorithm");
}

inline EvalResult cdf_auto(const OrderStatQuery& query, const PopulationLayout& layout, const EvalOptions& options = {}) {
  return cdf_with(auto_algorithm(layout), query, layout, options);
}

}  // namespace ostat
