#include "maxent/entropy.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace maxent {

namespace {

double plogp(double p) { return p < kZeroFloor ? 0.0 : p * std::log(p); }

double in_base(double nats, LogBase base) {
  return base == LogBase::base2 ? nats / std::numbers::ln2 : nats;
}

void require_nonnegative(std::span<const double> values, const char* what) {
  for (std::size_t i = 0; i < values.size(); ++i)
    if (!(values[i] >= 0.0) || !std::isfinite(values[i]))
      throw ValidationError(std::string(what) + " is negative or not finite at index " +
                            std::to_string(i));
}

}  // namespace

EntropyValue discrete_entropy(std::span<const double> masses, LogBase base) {
  if (masses.empty()) throw ValidationError("probability mass sequence is empty");
  require_nonnegative(masses, "probability mass");
  double sum = 0.0;
  double h = 0.0;
  for (double p : masses) {
    sum += p;
    h -= plogp(p);
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ValidationError("probability masses do not sum to 1");
  return {in_base(h, base), base};
}

EntropyValue differential_entropy(std::span<const double> density, const Support& support,
                                  LogBase base) {
  if (density.size() != support.size())
    throw ValidationError("density does not match support size");
  require_nonnegative(density, "density");
  const auto w = support.weights();
  double mass = 0.0;
  double h = 0.0;
  for (std::size_t i = 0; i < density.size(); ++i) {
    mass += w[i] * density[i];
    h -= w[i] * plogp(density[i]);
  }
  if (std::abs(mass - 1.0) > 1e-8) throw ValidationError("density does not integrate to 1");
  return {in_base(h, base), base};
}

EntropyValue entropy_of_increments(const UtilityIncrementVector& du, LogBase base) {
  return discrete_entropy(du.values(), base);
}

}  // namespace maxent
