#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "maxent/core.hpp"
#include "maxent/solver.hpp"
#include "maxent/utility_vector.hpp"

namespace maxent {

/**
 * Normalised utility curve U on a continuous support together with its
 * utility density u = U'. U(a) = 0 and U(b) = 1 are implied; `values()` holds
 * U at the quadrature nodes.
 */
class UtilityCurve {
 public:
  UtilityCurve(Support support, std::vector<double> density, std::vector<double> values);

  const Support& support() const noexcept { return support_; }
  std::span<const double> density() const noexcept { return density_; }
  std::span<const double> values() const noexcept { return values_; }

  /// U(x) for any x, integrating the panel interpolant of the density.
  double at(double x) const;

 private:
  Support support_;
  std::vector<double> density_;
  std::vector<double> values_;
};

/// U(x) = integral of u from a to x, scaled so that U(b) = 1.
UtilityCurve density_to_curve(std::span<const double> density, const Support& support);

/// u = U' by three-point differences (using U(a) = 0, U(b) = 1 at the ends),
/// clipped at zero and renormalised.
std::vector<double> curve_to_density(std::span<const double> curve, const Support& support);

struct MaxEntUtility {
  UtilityCurve curve;
  MaxEntSolution solution;
};

/// Maximum-entropy utility density under the problem's constraints, and the
/// utility curve it integrates to.
MaxEntUtility maxent_utility(const Problem& problem, const SolverOptions& options = {});

/// An assessed utility value U(x) = u.
struct Assessment {
  double x = 0.0;
  double u = 0.0;
};

/**
 * Maximum-entropy utility through assessed points, via cumulative indicator
 * constraints E[1[a, x_k]] = u_k. The returned support keeps a, b and the node
 * count of `support` but has its panel edges aligned to the assessed x_k, so
 * the piecewise-constant density is integrated exactly.
 */
MaxEntUtility maxent_utility_from_assessments(const Support& support,
                                              std::span<const Assessment> assessments,
                                              const SolverOptions& options = {});

/// Support aligned to the assessment abscissas, plus the indicator constraints.
Problem assessment_problem(const Support& support, std::span<const Assessment> assessments);

enum class UtilityFamily { linear_risk_neutral, cara, gaussian_s_shaped, general };

std::string_view to_string(UtilityFamily family);

UtilityFamily classify_family(std::span<const ConstraintSpec> constraints);

}  // namespace maxent
