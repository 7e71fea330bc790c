#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ostat/error.hpp"

namespace ostat {

using CountValue = boost::multiprecision::cpp_int;

/// binom(n, r) as an exact integer; zero outside 0 <= r <= n.
inline CountValue binomial(long n, long r) {
  if (r < 0 || n < 0 || r > n) return 0;
  r = std::min(r, n - r);
  CountValue out = 1;
  for (long i = 1; i <= r; ++i) {
    out *= n - r + i;
    out /= i;  // exact: out is binom(n - r + i, i) after this step
  }
  return out;
}

/// C_m = binom(2m, m) / (m + 1).
inline CountValue catalan_number(int m) {
  if (m < 0) throw DomainError("catalan_number: m must be >= 0");
  return binomial(2L * m, m) / (m + 1);
}

/// a_{k,m} = nu(1, 2, ..., k; m) = binom(m+k, k) - binom(m+k, k-1).
inline CountValue catalan_triangle(int k, int m) {
  if (k < 1 || m < 1 || k > m) {
    throw DomainError("catalan_triangle: requires 1 <= k <= m, got k=" + std::to_string(k) + ", m=" + std::to_string(m));
  }
  return binomial(m + k, k) - binomial(m + k, k - 1);
}

namespace detail {

inline void validate_indices(std::span<const int> indices, int m) {
  if (m < 1) throw DomainError("indices: m must be >= 1");
  if (indices.empty()) throw DomainError("indices: at least one index is required");
  for (std::size_t j = 0; j < indices.size(); ++j) {
    if (indices[j] < 1 || indices[j] > m) {
      throw DomainError("indices: " + std::to_string(indices[j]) + " outside [1, " + std::to_string(m) + "]");
    }
    if (j > 0 && indices[j - 1] >= indices[j]) throw DomainError("indices: must be strictly increasing");
  }
}

/// Lexicographically largest v with v[j] <= caps[j] and sum(v) == total.
/// Returns false if the caps cannot hold `total`.
inline bool first_bounded_composition(std::span<int> v, std::span<const int> caps, int total) {
  for (std::size_t j = 0; j < v.size(); ++j) {
    v[j] = std::min(caps[j], total);
    total -= v[j];
  }
  return total == 0;
}

/// Advance v to the next bounded composition of the same total in
/// descending lexicographic order. Returns false when v was the last one.
inline bool next_bounded_composition(std::span<int> v, std::span<const int> caps) {
  if (v.size() < 2) return false;
  int suffix_total = v.back();
  int suffix_cap = caps.back();
  for (std::size_t p = v.size() - 1; p-- > 0;) {
    if (v[p] > 0 && suffix_cap >= suffix_total + 1) {
      --v[p];
      first_bounded_composition(v.subspan(p + 1), caps.subspan(p + 1), suffix_total + 1);
      return true;
    }
    suffix_total += v[p];
    suffix_cap += caps[p];
  }
  return false;
}

}  // namespace detail

/// A member i = (i_0, ..., i_{k+1}) of the summation index set: 0 = i_0,
/// i_{k+1} = m, nondecreasing, and i_j >= n_j for 1 <= j <= k.
class IndexVector {
 public:
  IndexVector() = default;
  explicit IndexVector(std::vector<int> entries) : entries_(std::move(entries)) {}

  std::span<const int> entries() const { return entries_; }
  int operator[](int j) const { return entries_[static_cast<std::size_t>(j)]; }
  int k() const { return static_cast<int>(entries_.size()) - 2; }
  int m() const { return entries_.back(); }

  /// Height of block j (1 <= j <= k+1): i_j - i_{j-1}.
  int block(int j) const { return (*this)[j] - (*this)[j - 1]; }

  std::vector<int> blocks() const {
    std::vector<int> out(static_cast<std::size_t>(k() + 1));
    for (int j = 1; j <= k() + 1; ++j) out[static_cast<std::size_t>(j - 1)] = block(j);
    return out;
  }

  bool is_member_of(std::span<const int> indices, int total) const {
    const int kk = static_cast<int>(indices.size());
    if (k() != kk || entries_.front() != 0 || m() != total) return false;
    for (int j = 1; j <= kk + 1; ++j) {
      if ((*this)[j] < (*this)[j - 1]) return false;
    }
    for (int j = 1; j <= kk; ++j) {
      if ((*this)[j] < indices[static_cast<std::size_t>(j - 1)]) return false;
    }
    return true;
  }

  std::vector<int>& mutable_entries() { return entries_; }

  friend bool operator==(const IndexVector&, const IndexVector&) = default;

 private:
  std::vector<int> entries_;
};

/// Lazy, lexicographic stream over the summation index set for (indices, m).
///
///   IndexVectorStream s(indices, m);
///   while (s.next()) use(s.current());
class IndexVectorStream {
 public:
  IndexVectorStream(std::span<const int> indices, int m) : indices_(indices.begin(), indices.end()), m_(m) {
    detail::validate_indices(indices_, m_);
  }

  bool next() {
    auto& e = current_.mutable_entries();
    const int k = static_cast<int>(indices_.size());
    if (!started_) {
      started_ = true;
      e.assign(static_cast<std::size_t>(k + 2), 0);
      for (int j = 1; j <= k; ++j) e[static_cast<std::size_t>(j)] = indices_[static_cast<std::size_t>(j - 1)];
      e.back() = m_;
      return true;
    }
    // Rightmost position that can still grow; later positions reset to
    // the smallest admissible value.
    for (int j = k; j >= 1; --j) {
      auto& slot = e[static_cast<std::size_t>(j)];
      if (slot < m_) {
        ++slot;
        for (int l = j + 1; l <= k; ++l) {
          e[static_cast<std::size_t>(l)] = std::max(indices_[static_cast<std::size_t>(l - 1)], e[static_cast<std::size_t>(l - 1)]);
        }
        return true;
      }
    }
    return false;
  }

  const IndexVector& current() const { return current_; }

 private:
  std::vector<int> indices_;
  int m_;
  bool started_ = false;
  IndexVector current_;
};

/// Calls fn(const IndexVector&) for every member of the summation set.
template <typename Fn>
void for_each_index_vector(std::span<const int> indices, int m, Fn&& fn) {
  IndexVectorStream stream(indices, m);
  while (stream.next()) fn(stream.current());
}

/// Materialized index set; for tests and small cases only.
inline std::vector<IndexVector> enumerate_index_vectors(std::span<const int> indices, int m) {
  std::vector<IndexVector> out;
  for_each_index_vector(indices, m, [&](const IndexVector& v) { out.push_back(v); });
  return out;
}

/// nu(n_1, ..., n_k; m): the size of the summation index set, counted by
/// the nested-sum recurrence without enumerating it.
inline CountValue count_nu(std::span<const int> indices, int m) {
  detail::validate_indices(indices, m);
  // ways[v]: number of admissible prefixes (i_1, ..., i_j) ending in i_j = v.
  std::vector<CountValue> ways(static_cast<std::size_t>(m + 1), 0);
  ways[0] = 1;
  for (int n_j : indices) {
    std::vector<CountValue> next(static_cast<std::size_t>(m + 1), 0);
    CountValue running = 0;
    for (int v = 0; v <= m; ++v) {
      running += ways[static_cast<std::size_t>(v)];
      if (v >= n_j) next[static_cast<std::size_t>(v)] = running;
    }
    ways = std::move(next);
  }
  CountValue total = 0;
  for (const auto& w : ways) total += w;
  return total;
}

/// Lazy stream over allocation vectors lambda = (lambda_1, ..., lambda_{k+1})
/// with sum n and 0 <= lambda_j <= i_j - i_{j-1}, in descending
/// lexicographic order.
class AllocationVectorStream {
 public:
  AllocationVectorStream(const IndexVector& ivec, int n) : caps_(ivec.blocks()), n_(n) {
    if (n < 0 || n > ivec.m()) {
      throw DomainError("allocation vectors: n=" + std::to_string(n) + " outside [0, " + std::to_string(ivec.m()) + "]");
    }
    current_.resize(caps_.size());
  }

  bool next() {
    if (!started_) {
      started_ = true;
      return detail::first_bounded_composition(current_, caps_, n_);
    }
    return detail::next_bounded_composition(current_, caps_);
  }

  std::span<const int> current() const { return current_; }
  std::span<const int> caps() const { return caps_; }

 private:
  std::vector<int> caps_;
  int n_;
  bool started_ = false;
  std::vector<int> current_;
};

inline std::vector<std::vector<int>> enumerate_allocation_vectors(const IndexVector& ivec, int n) {
  std::vector<std::vector<int>> out;
  AllocationVectorStream s(ivec, n);
  while (s.next()) out.emplace_back(s.current().begin(), s.current().end());
  return out;
}

/// Lazy stream over (k+1) x N allocation matrices [lambda_js] with row sums
/// i_j - i_{j-1} and column sums m_s. Descending lexicographic order of the
/// row-major flattening; current() is that flattening.
class AllocationMatrixStream {
 public:
  AllocationMatrixStream(const IndexVector& ivec, std::span<const int> sizes)
      : rows_(ivec.blocks()), sizes_(sizes.begin(), sizes.end()) {
    if (sizes_.empty()) throw DomainError("allocation matrices: at least one population is required");
    int total = 0;
    for (int s : sizes_) {
      if (s <= 0) throw DomainError("allocation matrices: population sizes must be > 0");
      total += s;
    }
    if (total != ivec.m()) {
      throw DomainError("allocation matrices: population sizes sum to " + std::to_string(total) +
                        " but the index vector has m=" + std::to_string(ivec.m()));
    }
    cells_.resize(rows_.size() * sizes_.size());
    // remaining_[r] holds column capacities left before row r is filled.
    remaining_.assign(rows_.size() + 1, std::vector<int>(sizes_.size()));
  }

  bool next() {
    const std::size_t r_count = rows_.size();
    if (!started_) {
      started_ = true;
      remaining_[0] = sizes_;
      fill_from(0);
      return true;
    }
    if (r_count < 2) return false;
    for (std::size_t r = r_count - 1; r-- > 0;) {
      if (detail::next_bounded_composition(row(r), remaining_[r])) {
        update_remaining(r);
        fill_from(r + 1);
        return true;
      }
    }
    return false;
  }

  int row_count() const { return static_cast<int>(rows_.size()); }
  int col_count() const { return static_cast<int>(sizes_.size()); }
  std::span<const int> current() const { return cells_; }
  int at(int j, int s) const { return cells_[static_cast<std::size_t>(j) * sizes_.size() + static_cast<std::size_t>(s)]; }

 private:
  std::span<int> row(std::size_t r) { return std::span<int>(cells_).subspan(r * sizes_.size(), sizes_.size()); }

  void update_remaining(std::size_t r) {
    auto rr = row(r);
    for (std::size_t s = 0; s < sizes_.size(); ++s) remaining_[r + 1][s] = remaining_[r][s] - rr[s];
  }

  // Greedy-first rows from r on. Any row split within the remaining column
  // capacities leaves a feasible remainder, and the last row is forced.
  void fill_from(std::size_t r) {
    for (; r < rows_.size(); ++r) {
      detail::first_bounded_composition(row(r), remaining_[r], rows_[r]);
      update_remaining(r);
    }
  }

  std::vector<int> rows_;
  std::vector<int> sizes_;
  std::vector<int> cells_;
  std::vector<std::vector<int>> remaining_;
  bool started_ = false;
};

inline std::vector<std::vector<int>> enumerate_allocation_matrices(const IndexVector& ivec, std::span<const int> sizes) {
  std::vector<std::vector<int>> out;
  AllocationMatrixStream s(ivec, sizes);
  while (s.next()) out.emplace_back(s.current().begin(), s.current().end());
  return out;
}

}  // namespace ostat
