#include "maxent/utility.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "maxent/quadrature.hpp"

namespace maxent {

namespace {

void require_continuous(const Support& support) {
  if (!support.is_continuous()) throw ValidationError("utility curves need a continuous support");
}

}  // namespace

UtilityCurve::UtilityCurve(Support support, std::vector<double> density, std::vector<double> values)
    : support_(std::move(support)), density_(std::move(density)), values_(std::move(values)) {
  require_continuous(support_);
  if (density_.size() != support_.size() || values_.size() != support_.size())
    throw ValidationError("utility curve does not match support size");
  for (double u : density_)
    if (!(u >= 0.0) || !std::isfinite(u)) throw ValidationError("utility density must be nonnegative");
  if (std::abs(support_.integrate(density_) - 1.0) > 1e-10)
    throw ValidationError("utility density must integrate to 1");
  double prev = 0.0;
  for (double v : values_) {
    if (!(v >= prev)) throw ValidationError("utility curve must be nondecreasing");
    prev = v;
  }
  if (prev > 1.0) throw ValidationError("utility curve exceeds 1");
}

double UtilityCurve::at(double x) const {
  if (x <= support_.lower()) return 0.0;
  if (x >= support_.upper()) return 1.0;
  return std::clamp(quadrature::integral_to(support_, density_, x), 0.0, 1.0);
}

UtilityCurve density_to_curve(std::span<const double> density, const Support& support) {
  require_continuous(support);
  if (density.size() != support.size()) throw ValidationError("density does not match support size");
  for (double u : density)
    if (!(u >= 0.0) || !std::isfinite(u)) throw ValidationError("utility density must be nonnegative");
  const double mass = support.integrate(density);
  if (std::abs(mass - 1.0) > 1e-8) throw ValidationError("utility density must integrate to 1");

  std::vector<double> u(density.begin(), density.end());
  for (double& v : u) v /= mass;
  auto U = quadrature::cumulative(support, u);
  // The panel interpolant of a steep positive density can dip slightly.
  double running = 0.0;
  for (double& v : U) {
    v = std::clamp(v, running, 1.0);
    running = v;
  }
  return UtilityCurve(support, std::move(u), std::move(U));
}

std::vector<double> curve_to_density(std::span<const double> curve, const Support& support) {
  require_continuous(support);
  if (curve.size() != support.size()) throw ValidationError("curve does not match support size");
  double prev = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (!std::isfinite(curve[i])) throw ValidationError("utility curve is not finite");
    if (curve[i] < prev)
      throw ValidationError("utility curve decreases at node " + std::to_string(i));
    prev = curve[i];
  }
  if (prev > 1.0) throw ValidationError("utility curve decreases towards U(b) = 1");

  auto u = quadrature::derivative(support.nodes(), curve, support.lower(), 0.0, support.upper(), 1.0);
  for (double& v : u) v = std::max(v, 0.0);
  const double mass = support.integrate(u);
  if (!(mass > 0.0)) throw ValidationError("utility curve is flat");
  for (double& v : u) v /= mass;
  return u;
}

MaxEntUtility maxent_utility(const Problem& problem, const SolverOptions& options) {
  require_continuous(problem.support);
  auto solution = solve(problem, options);
  auto curve = density_to_curve(solution.density(), solution.support());
  return MaxEntUtility{std::move(curve), std::move(solution)};
}

Problem assessment_problem(const Support& support, std::span<const Assessment> assessments) {
  require_continuous(support);
  const double a = support.lower();
  const double b = support.upper();
  std::vector<double> cuts(support.breakpoints().begin(), support.breakpoints().end());
  std::vector<ConstraintSpec> constraints;
  double prev_x = a;
  double prev_u = 0.0;
  for (std::size_t k = 0; k < assessments.size(); ++k) {
    const auto [x, u] = assessments[k];
    const std::string tag = "assessment " + std::to_string(k + 1) + ": ";
    if (!(x > a && x < b)) throw ValidationError(tag + "x must lie strictly inside (a, b)");
    if (!(u > 0.0 && u < 1.0)) throw ValidationError(tag + "assessed value must lie in (0, 1)");
    if (!(x > prev_x)) throw ValidationError(tag + "x values must be strictly increasing");
    if (!(u > prev_u)) throw ValidationError(tag + "assessed values must be strictly increasing");
    prev_x = x;
    prev_u = u;
    cuts.push_back(x);
    constraints.push_back(ConstraintSpec::equality(ConstraintFunction::indicator(a, x), u));
  }
  auto aligned = Support::continuous(a, b, static_cast<int>(support.size()), cuts);
  return validate_problem(std::move(aligned), std::move(constraints));
}

MaxEntUtility maxent_utility_from_assessments(const Support& support,
                                              std::span<const Assessment> assessments,
                                              const SolverOptions& options) {
  return maxent_utility(assessment_problem(support, assessments), options);
}

std::string_view to_string(UtilityFamily family) {
  switch (family) {
    case UtilityFamily::linear_risk_neutral: return "linear_risk_neutral";
    case UtilityFamily::cara: return "cara";
    case UtilityFamily::gaussian_s_shaped: return "gaussian_s_shaped";
    case UtilityFamily::general: return "general";
  }
  return "general";
}

UtilityFamily classify_family(std::span<const ConstraintSpec> constraints) {
  auto is_power = [](const ConstraintSpec& c, int k) {
    return c.function.kind() == ConstraintFunction::Kind::power && c.function.exponent() == k;
  };
  if (constraints.empty()) return UtilityFamily::linear_risk_neutral;
  if (constraints.size() == 1 && is_power(constraints[0], 1)) return UtilityFamily::cara;
  if (constraints.size() == 2 &&
      ((is_power(constraints[0], 1) && is_power(constraints[1], 2)) ||
       (is_power(constraints[0], 2) && is_power(constraints[1], 1))))
    return UtilityFamily::gaussian_s_shaped;
  return UtilityFamily::general;
}

}  // namespace maxent
