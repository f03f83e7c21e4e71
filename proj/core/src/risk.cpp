#include "maxent/risk.hpp"

#include <cmath>

#include "maxent/entropy.hpp"
#include "maxent/quadrature.hpp"

namespace maxent {

namespace {

// Nodes whose neighbour stencil [x_{i-1}, x_{i+1}] contains a jump location.
std::vector<bool> straddling(const Support& support, std::span<const double> jumps) {
  const auto x = support.nodes();
  const std::size_t n = x.size();
  std::vector<bool> mask(n, false);
  for (double e : jumps) {
    if (e <= support.lower() || e >= support.upper()) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const double left = i == 0 ? support.lower() : x[i - 1];
      const double right = i + 1 == n ? support.upper() : x[i + 1];
      if (left <= e && e <= right) mask[i] = true;
    }
  }
  return mask;
}

}  // namespace

RiskAversionProfile risk_aversion_analytic(const MaxEntSolution& solution) {
  const auto& support = solution.support();
  if (!support.is_continuous()) throw ValidationError("risk aversion needs a continuous support");
  const auto& constraints = solution.constraints();
  const auto lambda = solution.multipliers();

  std::vector<double> jumps;
  for (const auto& c : constraints) {
    if (c.function.kind() == ConstraintFunction::Kind::tabulated && !c.function.has_derivative())
      throw ValidationError("tabulated constraint has no derivative; gamma is undefined");
    if (c.function.kind() == ConstraintFunction::Kind::indicator) {
      jumps.push_back(c.function.lo());
      jumps.push_back(c.function.hi());
    }
  }
  const auto mask = straddling(support, jumps);

  RiskAversionProfile profile{support, {}, {}, {}};
  const std::size_t n = support.size();
  for (std::size_t j = 0; j < constraints.size(); ++j) {
    auto term = constraints[j].function.tabulate_derivative(support);
    for (std::size_t i = 0; i < n; ++i) term[i] = mask[i] ? 0.0 : lambda[j] * term[i];
    profile.terms.push_back(std::move(term));
    profile.labels.push_back(constraints[j].function.describe());
  }
  profile.gamma.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (mask[i]) continue;
    double g = 0.0;
    for (const auto& term : profile.terms) g += term[i];
    profile.gamma[i] = g;
  }
  return profile;
}

RiskAversionProfile risk_aversion_numeric(const UtilityCurve& curve) {
  const auto& support = curve.support();
  const auto u = curve.density();
  const std::size_t n = u.size();

  std::vector<double> neg_log(n);
  for (std::size_t i = 0; i < n; ++i) {
    const bool interior = i > 0 && i + 1 < n;
    if (interior && u[i] <= kZeroFloor)
      throw ValidationError("utility density vanishes at interior node " + std::to_string(i));
    neg_log[i] = -std::log(std::max(u[i], kZeroFloor));
  }
  const auto slope = quadrature::interior_derivative(support.nodes(), neg_log);
  const auto mask = straddling(support, support.breakpoints());

  RiskAversionProfile profile{support, std::vector<std::optional<double>>(n),
                              {std::vector<double>(n, 0.0)}, {"-dlog(u)/dx"}};
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (mask[i]) continue;
    profile.gamma[i] = slope[i];
    profile.terms[0][i] = slope[i];
  }
  return profile;
}

}  // namespace maxent
