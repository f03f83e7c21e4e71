#pragma once

#include <span>
#include <vector>

#include "maxent/core.hpp"

namespace maxent::quadrature {

/// Gauss-Legendre nodes (ascending) and weights on [-1, 1].
struct ReferenceRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Supported orders are 16 and 32.
const ReferenceRule& gauss_legendre(int order);

/// Running integral of `values` from a up to each node of a continuous
/// support, using the interpolating polynomial of each panel.
std::vector<double> cumulative(const Support& support, std::span<const double> values);

/// Integral of the panel interpolant of `values` from a to x, for x in [a,b].
double integral_to(const Support& support, std::span<const double> values, double x);

/// Derivative at every node from three-point Lagrange stencils on the
/// (possibly non-uniform) node sequence. Stencils at the two ends use the
/// supplied boundary abscissas and values, so every node gets a
/// second-order formula.
std::vector<double> derivative(std::span<const double> x, std::span<const double> f,
                               double x_left, double f_left,
                               double x_right, double f_right);

/// Three-point derivative at interior nodes only; entries 0 and n-1 are
/// left at zero.
std::vector<double> interior_derivative(std::span<const double> x,
                                        std::span<const double> f);

}  // namespace maxent::quadrature
