#pragma once

// Domain types shared by the maxent library: supports, constraint
// functions, constraint specifications and solved densities.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace maxent {

/// Raised when a support, constraint or solution violates a type invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised by the solvers when the targets cannot be met by an exponential-form
/// density (outside the attainable moment set, on its boundary, or the
/// active-set iteration cycles).
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SupportKind { discrete, continuous };

inline constexpr int kDefaultNodes = 1024;
inline constexpr int kMinNodes = 16;

/**
 * Domain of the random variable (or of the prospects, for utilities).
 *
 * A discrete support is an ordered point set with unit weights. A continuous
 * support is a finite interval [a,b] discretised once by a composite
 * Gauss-Legendre rule; every downstream integral uses exactly these nodes and
 * weights, so results are deterministic for a given node count.
 *
 * Continuous grids use panels of 32 nodes (16 when the node count is an odd
 * multiple of 16). Optional breakpoints become panel edges, which makes
 * integrals of functions with jumps at those points exact.
 */
class Support {
 public:
  static Support discrete(std::vector<double> points);
  static Support continuous(double a, double b, int nodes = kDefaultNodes,
                            std::span<const double> breakpoints = {});

  SupportKind kind() const noexcept { return kind_; }
  bool is_discrete() const noexcept { return kind_ == SupportKind::discrete; }
  bool is_continuous() const noexcept { return kind_ == SupportKind::continuous; }

  std::size_t size() const noexcept { return nodes_.size(); }
  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }
  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }
  double length() const noexcept { return upper_ - lower_; }

  /// Panel edges a = e_0 < ... < e_M = b; empty for discrete supports.
  std::span<const double> panel_edges() const noexcept { return edges_; }
  /// Interior breakpoints the grid was aligned to.
  std::span<const double> breakpoints() const noexcept { return breakpoints_; }
  /// Gauss-Legendre order of each panel; 0 for discrete supports.
  int panel_order() const noexcept { return order_; }

  /// Sum (discrete) or quadrature (continuous) of per-node values.
  double integrate(std::span<const double> values) const;

  friend bool operator==(const Support&, const Support&) = default;

 private:
  Support() = default;

  SupportKind kind_ = SupportKind::discrete;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> edges_;
  std::vector<double> breakpoints_;
  double lower_ = 0.0;
  double upper_ = 0.0;
  int order_ = 0;
};

/// One constraint function h(x): a power x^k, an indicator of [c,d], or an
/// explicit table of values (optionally with derivatives) per support node.
class ConstraintFunction {
 public:
  enum class Kind { power, indicator, tabulated };

  static ConstraintFunction power(int exponent);
  static ConstraintFunction indicator(double lo, double hi);
  static ConstraintFunction tabulated(std::vector<double> values,
                                      std::vector<double> derivative = {});

  Kind kind() const noexcept { return kind_; }
  int exponent() const noexcept { return exponent_; }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  std::span<const double> table() const noexcept { return table_; }
  std::span<const double> derivative_table() const noexcept { return derivative_; }
  bool has_derivative() const noexcept {
    return kind_ != Kind::tabulated || !derivative_.empty();
  }

  /// Pointwise value; tabulated functions have no pointwise form.
  double operator()(double x) const;

  /// h(x_i) for every node of the support.
  std::vector<double> tabulate(const Support& support) const;

  /// h'(x_i) for every node; indicators give 0 (their jumps are handled by
  /// callers). Throws ValidationError when no derivative is available.
  std::vector<double> tabulate_derivative(const Support& support) const;

  /// Short human-readable form, e.g. "x^2" or "1[0,0.5]".
  std::string describe() const;

  friend bool operator==(const ConstraintFunction&,
                         const ConstraintFunction&) = default;

 private:
  ConstraintFunction() = default;

  Kind kind_ = Kind::power;
  int exponent_ = 1;
  double lo_ = 0.0;
  double hi_ = 0.0;
  std::vector<double> table_;
  std::vector<double> derivative_;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// A constraint E[h] = b, or lo <= E[h] <= hi.
struct ConstraintSpec {
  ConstraintFunction function;
  std::variant<double, Interval> target;

  static ConstraintSpec equality(ConstraintFunction f, double value);
  static ConstraintSpec bounded(ConstraintFunction f, double lo, double hi);

  bool is_equality() const noexcept { return std::holds_alternative<double>(target); }
  double value() const { return std::get<double>(target); }
  Interval interval() const { return std::get<Interval>(target); }

  friend bool operator==(const ConstraintSpec&, const ConstraintSpec&) = default;
};

struct Problem {
  Support support;
  std::vector<ConstraintSpec> constraints;

  friend bool operator==(const Problem&, const Problem&) = default;
};

/// Checks every support and constraint invariant; returns the problem
/// unchanged or throws ValidationError naming the first violation.
Problem validate_problem(Support support, std::vector<ConstraintSpec> constraints);
Problem validate_problem(const Problem& problem);

std::vector<ConstraintFunction> functions_of(std::span<const ConstraintSpec> constraints);

/// Which side of an interval constraint is held at equality.
enum class ActiveBound { none, lower, upper, equality };

struct SolverDiagnostics {
  int iterations = 0;             ///< Newton iterations, summed over active-set passes
  int outer_iterations = 0;       ///< active-set passes (1 for pure equality)
  double gradient_max_norm = 0.0; ///< final dual gradient max-norm
  std::vector<double> residuals;  ///< per constraint: E[h] - b, or distance outside [lo,hi]
  std::vector<ActiveBound> active;
  std::vector<double> dual_trace; ///< dual value at each accepted Newton iterate
};

/**
 * A solved maximum-entropy density p(x) = exp(-sum_j lambda_j h_j(x)) / Z.
 *
 * Holds the per-node density (masses for discrete supports), the multipliers,
 * log Z (the normalising constant; lambda_0 + 1 in Lagrangean form) and the
 * entropy. Construction re-derives the density from the multipliers and
 * rejects anything that is not normalised, strictly positive and consistent.
 */
class MaxEntSolution {
 public:
  MaxEntSolution(Support support, std::vector<ConstraintSpec> constraints,
                 std::vector<double> multipliers, double log_partition,
                 std::vector<double> density, double entropy,
                 SolverDiagnostics diagnostics);

  const Support& support() const noexcept { return support_; }
  const std::vector<ConstraintSpec>& constraints() const noexcept { return constraints_; }
  std::span<const double> density() const noexcept { return density_; }
  std::span<const double> multipliers() const noexcept { return multipliers_; }
  double log_partition() const noexcept { return log_partition_; }
  double entropy() const noexcept { return entropy_; }
  const SolverDiagnostics& diagnostics() const noexcept { return diagnostics_; }

 private:
  Support support_;
  std::vector<ConstraintSpec> constraints_;
  std::vector<double> multipliers_;
  double log_partition_;
  std::vector<double> density_;
  double entropy_;
  SolverDiagnostics diagnostics_;
};

/// exp(-sum_j lambda_j h_j(x_i) - log_partition) at every node.
std::vector<double> exponential_density(const Support& support,
                                        std::span<const ConstraintFunction> functions,
                                        std::span<const double> multipliers,
                                        double log_partition);

}  // namespace maxent
