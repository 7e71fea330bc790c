#pragma once

#include <cmath>

namespace ostat {

/// Neumaier's variant of Kahan summation.
///
/// Unlike plain Kahan, the compensation is also correct when the incoming
/// term is larger in magnitude than the running sum, which matters for the
/// alternating-sign sums of the permanent kernel.
template <typename Value>
class NeumaierSum {
 public:
  NeumaierSum() = default;
  explicit NeumaierSum(Value initial) : sum_(initial) {}

  NeumaierSum& operator+=(Value term) {
    const Value t = sum_ + term;
    if (std::abs(sum_) >= std::abs(term)) {
      compensation_ += (sum_ - t) + term;
    } else {
      compensation_ += (term - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  NeumaierSum& operator-=(Value term) { return *this += -term; }

  /// Merge another partial sum (used by partitioned reductions).
  NeumaierSum& operator+=(const NeumaierSum& other) {
    *this += other.sum_;
    *this += other.compensation_;
    return *this;
  }

  Value value() const { return sum_ + compensation_; }

 private:
  Value sum_{0};
  Value compensation_{0};
};

}  // namespace ostat
