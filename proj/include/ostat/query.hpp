#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ostat/distributions.hpp"
#include "ostat/error.hpp"

namespace ostat {

/// Which order statistics are asked about, and at which thresholds.
///
/// Holds indices 1 <= n_1 < ... < n_k <= m and thresholds y_1 <= ... <= y_k.
/// Unsorted input is rejected rather than reordered.
class OrderStatQuery {
 public:
  OrderStatQuery(std::vector<int> indices, std::vector<ExtendedReal> thresholds, int m)
      : indices_(std::move(indices)), thresholds_(std::move(thresholds)), m_(m) {
    if (m_ < 1) throw DomainError("query: m must be >= 1, got " + std::to_string(m_));
    if (indices_.empty()) throw DomainError("query: at least one order statistic index is required");
    if (indices_.size() != thresholds_.size()) {
      throw DomainError("query: " + std::to_string(indices_.size()) + " indices but " +
                        std::to_string(thresholds_.size()) + " thresholds");
    }
    if (static_cast<int>(indices_.size()) > m_) throw DomainError("query: k exceeds m");
    for (std::size_t j = 0; j < indices_.size(); ++j) {
      if (indices_[j] < 1 || indices_[j] > m_) {
        throw DomainError("query: index " + std::to_string(indices_[j]) + " outside [1, " + std::to_string(m_) + "]");
      }
      if (j > 0 && !(indices_[j - 1] < indices_[j])) {
        throw DomainError("query: indices must be strictly increasing");
      }
      const auto& y = thresholds_[j];
      if (y.is_finite() && !std::isfinite(y.value())) {
        throw DomainError("query: thresholds must be finite reals or the symbolic infinities");
      }
      if (j > 0 && !(thresholds_[j - 1] <= y)) throw DomainError("query: thresholds must be nondecreasing");
    }
  }

  int m() const { return m_; }
  int k() const { return static_cast<int>(indices_.size()); }
  std::span<const int> indices() const { return indices_; }
  std::span<const ExtendedReal> thresholds() const { return thresholds_; }

  /// y_j for j = 0..k+1, with the sentinels at both ends.
  ExtendedReal threshold_with_sentinels(int j) const {
    if (j <= 0) return ExtendedReal::neg_inf();
    if (j > k()) return ExtendedReal::pos_inf();
    return thresholds_[static_cast<std::size_t>(j - 1)];
  }

 private:
  std::vector<int> indices_;
  std::vector<ExtendedReal> thresholds_;
  int m_;
};

/// Population sizes m_1..m_N with their CDFs G_1..G_N.
class PopulationLayout {
 public:
  struct Group {
    int size;
    Distribution dist;
  };

  explicit PopulationLayout(std::vector<Group> groups) : groups_(std::move(groups)) {
    if (groups_.empty()) throw DomainError("layout: at least one population is required");
    for (const auto& g : groups_) {
      if (g.size <= 0) throw DomainError("layout: every population size must be > 0");
      total_ += g.size;
    }
  }

  /// m identical copies of one distribution.
  static PopulationLayout iid(int m, Distribution d) { return PopulationLayout({Group{m, std::move(d)}}); }

  /// One population of size 1 per distribution.
  static PopulationLayout singletons(std::span<const Distribution> dists) {
    std::vector<Group> groups;
    groups.reserve(dists.size());
    for (const auto& d : dists) groups.push_back(Group{1, d});
    return PopulationLayout(std::move(groups));
  }

  std::span<const Group> groups() const { return groups_; }
  int populations() const { return static_cast<int>(groups_.size()); }
  int total() const { return total_; }

  std::vector<int> sizes() const {
    std::vector<int> out;
    for (const auto& g : groups_) out.push_back(g.size);
    return out;
  }

  bool all_singletons() const {
    for (const auto& g : groups_) {
      if (g.size != 1) return false;
    }
    return true;
  }

  /// The per-variable CDF list F_1..F_m, in population order.
  std::vector<Distribution> flattened() const {
    std::vector<Distribution> out;
    out.reserve(static_cast<std::size_t>(total_));
    for (const auto& g : groups_) {
      for (int i = 0; i < g.size; ++i) out.push_back(g.dist);
    }
    return out;
  }

 private:
  std::vector<Group> groups_;
  int total_ = 0;
};

}  // namespace ostat
