#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace maxent {

/// Normalised utilities of K ranked prospects: (0, u_1, ..., u_{K-2}, 1),
/// nondecreasing.
class UtilityVector {
 public:
  explicit UtilityVector(std::vector<double> values);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  friend bool operator==(const UtilityVector&, const UtilityVector&) = default;

 private:
  std::vector<double> values_;
};

/// Consecutive differences of a utility vector: K-1 nonnegative entries
/// summing to one, so they behave like a probability mass function.
class UtilityIncrementVector {
 public:
  explicit UtilityIncrementVector(std::vector<double> increments);

  std::span<const double> values() const noexcept { return increments_; }
  std::size_t size() const noexcept { return increments_.size(); }
  double operator[](std::size_t i) const { return increments_[i]; }

  friend bool operator==(const UtilityIncrementVector&, const UtilityIncrementVector&) = default;

 private:
  std::vector<double> increments_;
};

UtilityIncrementVector increments(const UtilityVector& u);

/// Running sums prefixed with 0. The last entry is pinned to exactly 1.
UtilityVector cumulate(const UtilityIncrementVector& du);

/// Volume 1/(K-2)! of the ordered region 0 <= u_1 <= ... <= u_{K-2} <= 1.
double utility_volume(int prospects);

}  // namespace maxent
