#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace hgcs::detail {

// Shared stopping rule: three consecutive contributing terms below
// tol * max(1, |sum|), plus a geometric tail estimate from a bound on the
// ratio between successive contributing terms.
class SeriesAccumulator {
 public:
  explicit SeriesAccumulator(double tol) : tol_(tol) {}

  // Adds `term`; `ratio_bound` bounds |next contributing term / term| for all
  // later terms. Returns true once converged.
  bool add(double term, double ratio_bound) {
    sum_ += term;
    ++count_;
    const double scale = tol_ * std::max(1.0, std::fabs(sum_));
    const double mag = std::fabs(term);
    run_ = mag < scale ? run_ + 1 : 0;
    if (run_ < 3 || !(ratio_bound < 1.0)) return false;
    tail_ = mag * ratio_bound / (1.0 - ratio_bound);
    return tail_ <= scale;
  }

  double sum() const { return sum_; }
  double tail() const { return tail_; }
  std::size_t count() const { return count_; }

 private:
  double tol_;
  double sum_ = 0.0;
  double tail_ = 0.0;
  std::size_t count_ = 0;
  int run_ = 0;
};

}  // namespace hgcs::detail
