#pragma once

#include <span>

#include "maxent/core.hpp"
#include "maxent/utility_vector.hpp"

namespace maxent {

enum class LogBase { natural, base2 };

struct EntropyValue {
  double value = 0.0;
  LogBase base = LogBase::natural;
};

/// Values below this are treated as exact zeros (0 log 0 = 0).
inline constexpr double kZeroFloor = 1e-300;

/// -sum p_i log p_i. Requires p_i >= 0 and sum p = 1 within 1e-9.
EntropyValue discrete_entropy(std::span<const double> masses, LogBase base = LogBase::natural);

/// Quadrature of -p log p over a continuous support (sum for discrete ones,
/// where it coincides with discrete_entropy). The density must integrate to
/// one within 1e-8.
EntropyValue differential_entropy(std::span<const double> density, const Support& support,
                                  LogBase base = LogBase::natural);

/// Spread of a utility increment vector, -sum du_i log du_i.
EntropyValue entropy_of_increments(const UtilityIncrementVector& du,
                                   LogBase base = LogBase::natural);

}  // namespace maxent
