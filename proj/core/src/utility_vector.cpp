#include "maxent/utility_vector.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "maxent/core.hpp"

namespace maxent {

UtilityVector::UtilityVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2) throw ValidationError("utility vector needs K >= 2 entries");
  if (values_.front() != 0.0) throw ValidationError("utility vector must start at 0");
  if (values_.back() != 1.0) throw ValidationError("utility vector must end at 1");
  for (std::size_t i = 1; i < values_.size(); ++i)
    if (!(values_[i - 1] <= values_[i]))
      throw ValidationError("utility vector must be nondecreasing (index " + std::to_string(i) + ")");
}

UtilityIncrementVector::UtilityIncrementVector(std::vector<double> increments)
    : increments_(std::move(increments)) {
  if (increments_.empty()) throw ValidationError("increment vector is empty");
  double sum = 0.0;
  for (double d : increments_) {
    if (!(d >= 0.0) || !std::isfinite(d)) throw ValidationError("utility increments must be nonnegative");
    sum += d;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw ValidationError("utility increments must sum to 1");
}

UtilityIncrementVector increments(const UtilityVector& u) {
  const auto v = u.values();
  std::vector<double> du(v.size() - 1);
  for (std::size_t i = 1; i < v.size(); ++i) du[i - 1] = v[i] - v[i - 1];
  return UtilityIncrementVector(std::move(du));
}

UtilityVector cumulate(const UtilityIncrementVector& du) {
  const auto d = du.values();
  std::vector<double> u(d.size() + 1, 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) u[i + 1] = u[i] + d[i];
  u.back() = 1.0;
  // Rounding in the running sum can overshoot the pinned endpoint.
  for (std::size_t i = u.size() - 1; i-- > 0;) u[i] = std::min(u[i], u[i + 1]);
  return UtilityVector(std::move(u));
}

double utility_volume(int prospects) {
  if (prospects < 3) throw ValidationError("utility volume needs K >= 3");
  double factorial = 1.0;
  for (int k = 2; k <= prospects - 2; ++k) factorial *= k;
  return 1.0 / factorial;
}

}  // namespace maxent
