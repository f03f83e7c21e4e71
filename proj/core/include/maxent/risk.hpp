#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "maxent/core.hpp"
#include "maxent/utility.hpp"

namespace maxent {

/**
 * Arrow-Pratt absolute risk aversion gamma(x) = -d ln u(x) / dx per node.
 *
 * For a maximum-entropy utility density gamma decomposes additively into
 * lambda_j h_j'(x); `terms[j]` holds those per-constraint contributions and
 * gamma is their sum. Nodes whose derivative stencil straddles a jump of the
 * density carry no value.
 */
struct RiskAversionProfile {
  Support support;
  std::vector<std::optional<double>> gamma;
  std::vector<std::vector<double>> terms;
  std::vector<std::string> labels;  ///< one per term

  bool defined(std::size_t i) const { return gamma[i].has_value(); }
};

/// gamma(x) = sum_j lambda_j h_j'(x) from the solved multipliers.
RiskAversionProfile risk_aversion_analytic(const MaxEntSolution& solution);

/// gamma by central differences of -ln u at interior nodes; the profile has
/// a single aggregate term.
RiskAversionProfile risk_aversion_numeric(const UtilityCurve& curve);

}  // namespace maxent
