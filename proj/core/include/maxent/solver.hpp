#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "maxent/core.hpp"

namespace maxent {

struct SolverOptions {
  /// Residual max-norm at convergence. Defaults to 1e-9 on discrete and
  /// 1e-8 on continuous supports.
  std::optional<double> tol;
  int max_iter = 200;
  double multiplier_cap = 1e4;
  int max_active_set_passes = 50;

  double tolerance_for(const Support& support) const {
    return tol.value_or(support.is_discrete() ? 1e-9 : 1e-8);
  }
};

/// Dual objective D(lambda) = log Z(lambda) + lambda . b and its derivatives.
struct DualState {
  Eigen::VectorXd multipliers;
  double log_partition = 0.0;
  double value = 0.0;
  Eigen::VectorXd gradient;  ///< b - E[h]
  Eigen::MatrixXd hessian;   ///< Cov[h] under the current density
  int iteration = 0;
};

/**
 * Tabulated constraint functions on a support, ready for repeated dual
 * evaluations. The functions are centred on their uniform-density means
 * internally; this only shifts log Z, which is undone on output.
 */
class DualProblem {
 public:
  DualProblem(const Support& support, std::span<const ConstraintFunction> functions,
              std::span<const double> targets);

  std::size_t constraint_count() const noexcept { return static_cast<std::size_t>(h_.cols()); }
  const Support& support() const noexcept { return support_; }

  /// Dual value, gradient and covariance at lambda.
  DualState evaluate(const Eigen::VectorXd& lambda) const;
  double value(const Eigen::VectorXd& lambda) const;

  /// log Z of the uncentred functions at lambda.
  double log_partition(const Eigen::VectorXd& lambda) const;

 private:
  // Returns log Z of the centred functions and fills the per-node masses.
  double centred_masses(const Eigen::VectorXd& lambda, Eigen::VectorXd* masses) const;

  Support support_;
  Eigen::MatrixXd h_;       // node x constraint, centred
  Eigen::VectorXd centre_;  // uniform-density means
  Eigen::VectorXd targets_; // centred targets
  Eigen::VectorXd log_w_;
};

/// log of sum_i w_i exp(-sum_j lambda_j h_j(x_i)), evaluated with a max shift.
double log_partition(const Support& support, std::span<const ConstraintFunction> functions,
                     std::span<const double> multipliers);

/// Maximum-entropy density under equality targets, by damped Newton on the
/// convex dual. Throws InfeasibleError when the targets are unattainable.
MaxEntSolution solve_equality(const Problem& problem, const SolverOptions& options = {});

/// Maximum-entropy density under a mix of equality and interval targets,
/// via an active-set loop over the interval constraints.
MaxEntSolution solve_interval(const Problem& problem, const SolverOptions& options = {});

/// Dispatches to solve_equality or solve_interval.
MaxEntSolution solve(const Problem& problem, const SolverOptions& options = {});

/// E[h] under the solution density for each function.
std::vector<double> moments(const MaxEntSolution& solution,
                            std::span<const ConstraintFunction> functions);

}  // namespace maxent
