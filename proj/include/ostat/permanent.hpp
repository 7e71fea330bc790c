#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "ostat/combinatorics.hpp"
#include "ostat/distributions.hpp"
#include "ostat/error.hpp"
#include "ostat/query.hpp"
#include "ostat/summation.hpp"

namespace ostat {

/// Dense row-major matrix of finite reals.
class RealMatrix {
 public:
  RealMatrix() = default;
  RealMatrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  /// From nested rows; every row must have the same length.
  static RealMatrix from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    RealMatrix out(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw DimensionError("matrix: ragged rows");
      std::copy(rows[i].begin(), rows[i].end(), out.row(i).begin());
    }
    return out;
  }

  static RealMatrix identity(std::size_t n) {
    RealMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
    return out;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return std::span<double>(data_).subspan(i * cols_, cols_); }
  std::span<const double> row(std::size_t i) const { return std::span<const double>(data_).subspan(i * cols_, cols_); }

  std::span<const double> data() const { return data_; }

  friend bool operator==(const RealMatrix&, const RealMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline constexpr std::size_t kPermanentDefinitionCap = 9;
inline constexpr std::size_t kPermanentRyserCap = 24;

namespace detail {

inline void check_permanent_input(const RealMatrix& a, std::size_t cap, const char* what) {
  if (!a.is_square()) {
    throw DimensionError(std::string(what) + ": matrix must be square, got " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()));
  }
  if (a.rows() > cap) throw SizeCapError(std::string(what) + " matrix order", a.rows(), cap);
  for (double v : a.data()) {
    if (!std::isfinite(v)) throw DomainError(std::string(what) + ": matrix entries must be finite");
  }
}

}  // namespace detail

/// per(A) as the sum over all m! permutations. Test oracle; m <= 9.
inline double permanent_definition(const RealMatrix& a) {
  detail::check_permanent_input(a, kPermanentDefinitionCap, "permanent_definition");
  const std::size_t m = a.rows();
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  NeumaierSum<double> sum;
  do {
    double term = 1.0;
    for (std::size_t i = 0; i < m; ++i) term *= a(i, perm[i]);
    sum += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return sum.value();
}

/// per(A) by Ryser's inclusion-exclusion over column subsets, m <= 24.
///
/// Uses the Nijenhuis-Wilf form: row sums start centred at
/// a_{i,m} - (1/2) sum_j a_{ij}, so only the 2^(m-1) subsets of the first
/// m-1 columns are visited, in Gray-code order with one column update per
/// step. The signed outer sum is accumulated with Neumaier compensation.
inline double permanent_ryser(const RealMatrix& a) {
  detail::check_permanent_input(a, kPermanentRyserCap, "permanent_ryser");
  const std::size_t m = a.rows();
  if (m == 0) return 1.0;
  if (m == 1) return a(0, 0);

  std::vector<double> x(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto r = a.row(i);
    NeumaierSum<double> row_sum;
    for (double v : r) row_sum += v;
    x[i] = r[m - 1] - 0.5 * row_sum.value();
  }

  auto product = [&] {
    double p = 1.0;
    for (double v : x) p *= v;
    return p;
  };

  NeumaierSum<double> total(product());
  const std::uint64_t steps = std::uint64_t{1} << (m - 1);
  double sign = 1.0;
  for (std::uint64_t g = 1; g < steps; ++g) {
    const auto col = static_cast<std::size_t>(std::countr_zero(g));
    const std::uint64_t gray = g ^ (g >> 1);
    const double dir = ((gray >> col) & 1U) ? 1.0 : -1.0;
    for (std::size_t i = 0; i < m; ++i) x[i] += dir * a(i, col);
    sign = -sign;
    total += sign * product();
  }
  const double parity = (m - 1) % 2 == 0 ? 1.0 : -1.0;
  return 2.0 * parity * total.value();
}

/// Per-variable CDF values F_i(y_j) for j = 0..k+1 (sentinels included),
/// laid out as table[i * (k + 2) + j].
inline std::vector<double> cdf_table(const OrderStatQuery& query, std::span<const Distribution> dists) {
  const int k = query.k();
  std::vector<double> table(dists.size() * static_cast<std::size_t>(k + 2));
  for (std::size_t i = 0; i < dists.size(); ++i) {
    for (int j = 0; j <= k + 1; ++j) {
      table[i * static_cast<std::size_t>(k + 2) + static_cast<std::size_t>(j)] =
          dists[i].cdf(query.threshold_with_sentinels(j));
    }
  }
  return table;
}

/// The expanded m x m Bapat-Beg matrix for one index vector: block row j
/// (height i_j - i_{j-1}) repeats the row F_i(y_j) - F_i(y_{j-1}).
inline RealMatrix build_bb_matrix(const OrderStatQuery& query, std::span<const Distribution> dists,
                                  const IndexVector& ivec) {
  const int m = query.m();
  if (static_cast<int>(dists.size()) != m) {
    throw DimensionError("build_bb_matrix: expected " + std::to_string(m) + " distributions, got " +
                         std::to_string(dists.size()));
  }
  if (!ivec.is_member_of(query.indices(), m)) throw DomainError("build_bb_matrix: index vector is not in the summation set");

  const int k = query.k();
  const auto table = cdf_table(query, dists);
  const auto stride = static_cast<std::size_t>(k + 2);
  RealMatrix out(static_cast<std::size_t>(m), static_cast<std::size_t>(m));
  std::size_t r = 0;
  for (int j = 1; j <= k + 1; ++j) {
    for (int rep = 0; rep < ivec.block(j); ++rep, ++r) {
      for (std::size_t i = 0; i < static_cast<std::size_t>(m); ++i) {
        const double hi = table[i * stride + static_cast<std::size_t>(j)];
        const double lo = table[i * stride + static_cast<std::size_t>(j - 1)];
        out(r, i) = std::clamp(hi - lo, 0.0, 1.0);
      }
    }
  }
  return out;
}

}  // namespace ostat
