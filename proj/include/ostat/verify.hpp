#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ostat/distributions.hpp"
#include "ostat/oracle.hpp"
#include "ostat/orderstats.hpp"
#include "ostat/query.hpp"
#include "ostat/rng.hpp"

namespace ostat {

/// The strategies exercised by the verification suite. Tests swap entries
/// for deliberately broken implementations to confirm the suite notices.
struct StrategyTable {
  std::function<EvalResult(const OrderStatQuery&, std::span<const Distribution>)> bapat_beg;
  std::function<EvalResult(const OrderStatQuery&, const Distribution&)> single_pop;
  std::function<EvalResult(const OrderStatQuery&, const Distribution&, const Distribution&, int)> two_pop;
  std::function<EvalResult(const OrderStatQuery&, const PopulationLayout&)> multi_pop;
  std::function<double(const OrderStatQuery&, std::span<const Distribution>)> exhaustive;

  static StrategyTable standard(const EvalOptions& options = {}) {
    StrategyTable t;
    t.bapat_beg = [options](const OrderStatQuery& q, std::span<const Distribution> d) { return cdf_bapat_beg(q, d, options); };
    t.single_pop = [options](const OrderStatQuery& q, const Distribution& d) { return cdf_single_population(q, d, options); };
    t.two_pop = [options](const OrderStatQuery& q, const Distribution& f, const Distribution& g, int n) {
      return cdf_two_populations(q, f, g, n, options);
    };
    t.multi_pop = [options](const OrderStatQuery& q, const PopulationLayout& l) { return cdf_multi_population(q, l, options); };
    t.exhaustive = [](const OrderStatQuery& q, std::span<const Distribution> d) { return cdf_exhaustive_discrete(q, d).value(); };
    return t;
  }
};

struct VerifyConfig {
  int max_m = 6;
  int trials = 100;
  std::uint64_t seed = 42;
  double tolerance = 1e-12;
};

struct VerifyReport {
  std::uint64_t pairings_checked = 0;
  std::uint64_t failures = 0;
  std::vector<std::string> failure_details;

  bool ok() const { return failures == 0; }
};

inline constexpr int kVerifyMaxM = 8;

namespace detail {

inline Distribution random_discrete(Rng& rng, int max_support) {
  static constexpr double grid[] = {0.0, 1.0, 2.0, 3.0};
  const int size = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(max_support));
  std::vector<double> pool(std::begin(grid), std::end(grid));
  for (std::size_t i = pool.size(); i > 1; --i) std::swap(pool[i - 1], pool[rng.next_u64() % i]);
  std::vector<double> support(pool.begin(), pool.begin() + size);
  std::sort(support.begin(), support.end());
  std::vector<double> probs(static_cast<std::size_t>(size));
  double total = 0.0;
  for (auto& p : probs) {
    p = 0.05 + rng.uniform01();
    total += p;
  }
  for (auto& p : probs) p /= total;
  return Distribution::discrete(std::move(support), std::move(probs));
}

inline std::string describe(const Distribution& d) { return to_json(d).dump(); }

}  // namespace detail

/// One randomized verification configuration: two discrete populations
/// (n of F, m - n of G), a third law H for the iid identity, and a query.
struct VerifyTrial {
  int m;
  int n;
  Distribution f;
  Distribution g;
  Distribution h;
  OrderStatQuery query;

  std::string describe() const {
    std::ostringstream os;
    os << "m=" << m << " n=" << n << " indices=[";
    for (std::size_t j = 0; j < query.indices().size(); ++j) os << (j ? "," : "") << query.indices()[j];
    os << "] thresholds=[";
    for (std::size_t j = 0; j < query.thresholds().size(); ++j) os << (j ? "," : "") << query.thresholds()[j].to_string();
    os << "] F=" << detail::describe(f) << " G=" << detail::describe(g) << " H=" << detail::describe(h);
    return os.str();
  }
};

inline VerifyTrial make_verify_trial(std::uint64_t seed, std::uint64_t trial, int max_m) {
  Rng rng(derive_seed(seed, trial));
  const int m = 2 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(max_m - 1));
  const int k = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(std::min(3, m)));
  const int n = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(m - 1));

  std::vector<int> pool(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) pool[static_cast<std::size_t>(i)] = i + 1;
  for (std::size_t i = pool.size(); i > 1; --i) std::swap(pool[i - 1], pool[rng.next_u64() % i]);
  std::vector<int> indices(pool.begin(), pool.begin() + k);
  std::sort(indices.begin(), indices.end());

  // Thresholds on and between the support grid points, ties included.
  std::vector<double> ys(static_cast<std::size_t>(k));
  for (auto& y : ys) y = -0.5 + 0.5 * static_cast<double>(rng.next_u64() % 9);
  std::sort(ys.begin(), ys.end());
  std::vector<ExtendedReal> thresholds(ys.begin(), ys.end());

  auto f = detail::random_discrete(rng, 3);
  auto g = detail::random_discrete(rng, 3);
  auto h = detail::random_discrete(rng, 3);
  return VerifyTrial{m, n, std::move(f), std::move(g), std::move(h), OrderStatQuery(std::move(indices), std::move(thresholds), m)};
}

/// Cross-strategy and oracle agreement over `trials` seeded configurations.
/// Each trial checks four pairings:
///   two_pop vs exhaustive, multi_pop vs exhaustive,
///   bapat_beg vs exhaustive, single_pop vs bapat_beg (iid layout).
inline VerifyReport run_verify(const VerifyConfig& config, const StrategyTable& table = StrategyTable::standard()) {
  if (config.max_m < 2 || config.max_m > kVerifyMaxM) {
    throw DomainError("verify: max_m must be in [2, " + std::to_string(kVerifyMaxM) + "], got " + std::to_string(config.max_m));
  }
  if (config.trials < 1) throw DomainError("verify: trials must be >= 1");

  VerifyReport report;
  for (int t = 0; t < config.trials; ++t) {
    const auto trial = make_verify_trial(config.seed, static_cast<std::uint64_t>(t), config.max_m);
    const PopulationLayout layout({{trial.n, trial.f}, {trial.m - trial.n, trial.g}});
    const auto flat = layout.flattened();
    const std::vector<Distribution> iid(static_cast<std::size_t>(trial.m), trial.h);

    auto check = [&](const char* name, double got, double want) {
      ++report.pairings_checked;
      if (!(std::abs(got - want) <= config.tolerance)) {
        ++report.failures;
        std::ostringstream os;
        os.precision(17);
        os << "trial " << t << " (seed " << config.seed << ") " << name << ": " << got << " vs " << want
           << " |diff|=" << std::abs(got - want) << " :: " << trial.describe();
        report.failure_details.push_back(os.str());
      }
    };

    const double exact = table.exhaustive(trial.query, flat);
    const double bb = table.bapat_beg(trial.query, flat).raw_value;
    check("two_pop vs exhaustive", table.two_pop(trial.query, trial.f, trial.g, trial.n).raw_value, exact);
    check("multi_pop vs exhaustive", table.multi_pop(trial.query, layout).raw_value, exact);
    check("bapat_beg vs exhaustive", bb, exact);
    check("single_pop vs bapat_beg (iid)", table.single_pop(trial.query, trial.h).raw_value,
          table.bapat_beg(trial.query, iid).raw_value);
  }
  return report;
}

}  // namespace ostat
