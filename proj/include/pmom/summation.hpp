#pragma once

#include <cmath>

namespace pmom {

// Neumaier's variant of Kahan summation. Merging two sums keeps both
// compensation terms, so an ordered reduction over chunk partials is as
// accurate as one long serial pass.
class CompensatedSum {
 public:
  constexpr CompensatedSum() = default;
  explicit constexpr CompensatedSum(double v) : sum_(v) {}

  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }

  void merge(const CompensatedSum& other) noexcept {
    add(other.sum_);
    comp_ += other.comp_;
  }

  CompensatedSum& operator+=(double v) noexcept {
    add(v);
    return *this;
  }
  CompensatedSum& operator-=(double v) noexcept {
    add(-v);
    return *this;
  }

  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace pmom
