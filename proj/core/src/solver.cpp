#include "maxent/solver.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>

#include "maxent/entropy.hpp"

namespace maxent {

namespace {

constexpr double kArmijoSlope = 1e-4;
constexpr double kBacktrack = 0.5;
constexpr int kMaxHalvings = 60;
constexpr double kRidge = 1e-10;
constexpr double kMaxCondition = 1e12;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double max_abs(const Eigen::VectorXd& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

double log_sum_exp(const Eigen::VectorXd& s) {
  const double top = s.maxCoeff();
  return top + std::log((s.array() - top).exp().sum());
}

// Exponents -sum_j lambda_j h_j(x_i), accumulated in constraint order.
std::vector<double> exponents(const Support& support,
                              std::span<const ConstraintFunction> functions,
                              std::span<const double> lambda) {
  std::vector<double> e(support.size(), 0.0);
  for (std::size_t j = 0; j < functions.size(); ++j) {
    const auto h = functions[j].tabulate(support);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] -= lambda[j] * h[i];
  }
  return e;
}

// An exponential-form density reaches a target only strictly inside the
// range of h over the support; boundary targets need point masses.
void check_attainable(const Support& support, const ConstraintFunction& f, double target,
                      std::size_t index) {
  const auto h = f.tabulate(support);
  const auto [lo, hi] = std::minmax_element(h.begin(), h.end());
  const std::string tag = "constraint " + std::to_string(index + 1) + " (" + f.describe() + "): ";
  if (target < *lo || target > *hi)
    throw InfeasibleError(tag + "infeasible or unbounded: target " + fmt(target) +
                          " lies outside the attainable range [" + fmt(*lo) + ", " + fmt(*hi) + "]");
  if (target == *lo || target == *hi)
    throw InfeasibleError(tag + "degenerate target " + fmt(target) +
                          " on the boundary of the attainable range [" + fmt(*lo) + ", " +
                          fmt(*hi) + "]");
}

struct NewtonResult {
  Eigen::VectorXd lambda;
  int iterations = 0;
  double gradient_max_norm = 0.0;
  std::vector<double> trace;
};

NewtonResult newton(const DualProblem& dual, double tol, const SolverOptions& options) {
  const auto m = static_cast<Eigen::Index>(dual.constraint_count());
  NewtonResult out;
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(m);

  for (int iter = 0;; ++iter) {
    DualState state = dual.evaluate(lambda);
    state.iteration = iter;
    out.trace.push_back(state.value);
    const double gnorm = max_abs(state.gradient);
    if (gnorm <= tol) {
      out.lambda = std::move(lambda);
      out.iterations = iter;
      out.gradient_max_norm = gnorm;
      return out;
    }
    if (iter >= options.max_iter)
      throw InfeasibleError("infeasible or unbounded: no convergence after " +
                            std::to_string(options.max_iter) + " iterations (residual " +
                            fmt(gnorm) + ")");
    if (max_abs(lambda) > options.multiplier_cap)
      throw InfeasibleError("infeasible or unbounded: multipliers exceed cap " +
                            fmt(options.multiplier_cap));

    Eigen::MatrixXd hess = state.hessian;
    hess.diagonal().array() += kRidge;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hess);
    Eigen::VectorXd step;
    const double smallest = eig.eigenvalues().minCoeff();
    const double largest = eig.eigenvalues().maxCoeff();
    if (eig.info() == Eigen::Success && smallest > 0.0 && largest / smallest <= kMaxCondition) {
      step = -eig.eigenvectors() *
             (eig.eigenvalues().cwiseInverse().asDiagonal() *
              (eig.eigenvectors().transpose() * state.gradient));
    } else {
      step = -state.gradient;
    }

    const double slope = state.gradient.dot(step);
    double t = 1.0;
    bool accepted = false;
    for (int k = 0; k < kMaxHalvings; ++k, t *= kBacktrack) {
      const Eigen::VectorXd trial = lambda + t * step;
      const double value = dual.value(trial);
      if (value <= state.value + kArmijoSlope * t * slope) {
        lambda = trial;
        accepted = true;
        break;
      }
      // Near the optimum the predicted decrease drops below the rounding
      // floor of D; accept steps that still shrink the gradient.
      if (std::abs(t * slope) < 1e-14 * std::max(1.0, std::abs(state.value)) &&
          value <= state.value + 1e-14 * std::max(1.0, std::abs(state.value)) &&
          max_abs(dual.evaluate(trial).gradient) < gnorm) {
        lambda = trial;
        accepted = true;
        break;
      }
    }
    if (!accepted)
      throw InfeasibleError("infeasible or unbounded: line search stalled at residual " +
                            fmt(gnorm));
  }
}

struct Assembled {
  std::vector<double> lambda;
  double log_partition;
  std::vector<double> density;
  std::vector<double> moments;
};

Assembled assemble(const Support& support, std::span<const ConstraintFunction> functions,
                   std::vector<double> lambda) {
  Assembled a;
  a.log_partition = log_partition(support, functions, lambda);
  a.density = exponential_density(support, functions, lambda, a.log_partition);
  a.lambda = std::move(lambda);
  const auto w = support.weights();
  for (const auto& f : functions) {
    const auto h = f.tabulate(support);
    double e = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) e += w[i] * a.density[i] * h[i];
    a.moments.push_back(e);
  }
  return a;
}

double entropy_of(const Support& support, std::span<const double> density) {
  return support.is_discrete() ? discrete_entropy(density).value
                               : differential_entropy(density, support).value;
}

}  // namespace

DualProblem::DualProblem(const Support& support, std::span<const ConstraintFunction> functions,
                         std::span<const double> targets)
    : support_(support) {
  if (functions.size() != targets.size())
    throw ValidationError("target count does not match constraint count");
  const auto n = static_cast<Eigen::Index>(support.size());
  const auto m = static_cast<Eigen::Index>(functions.size());
  const auto w = support.weights();
  const double total = support.integrate(std::vector<double>(support.size(), 1.0));

  h_.resize(n, m);
  centre_.resize(m);
  targets_.resize(m);
  log_w_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) log_w_[i] = std::log(w[i]);
  for (Eigen::Index j = 0; j < m; ++j) {
    const auto h = functions[j].tabulate(support);
    double mean = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) mean += w[i] * h[i];
    mean /= total;
    centre_[j] = mean;
    for (Eigen::Index i = 0; i < n; ++i) h_(i, j) = h[i] - mean;
    targets_[j] = targets[j] - mean;
  }
}

double DualProblem::centred_masses(const Eigen::VectorXd& lambda, Eigen::VectorXd* masses) const {
  Eigen::VectorXd s = log_w_;
  if (h_.cols() > 0) s.noalias() -= h_ * lambda;
  const double lse = log_sum_exp(s);
  if (masses) *masses = (s.array() - lse).exp().matrix();
  return lse;
}

double DualProblem::value(const Eigen::VectorXd& lambda) const {
  return centred_masses(lambda, nullptr) + lambda.dot(targets_);
}

double DualProblem::log_partition(const Eigen::VectorXd& lambda) const {
  return centred_masses(lambda, nullptr) - centre_.dot(lambda);
}

DualState DualProblem::evaluate(const Eigen::VectorXd& lambda) const {
  Eigen::VectorXd p;
  const double lse = centred_masses(lambda, &p);
  DualState st;
  st.multipliers = lambda;
  st.log_partition = lse - centre_.dot(lambda);
  st.value = lse + lambda.dot(targets_);
  const Eigen::VectorXd mean = h_.transpose() * p;
  st.gradient = targets_ - mean;
  const Eigen::MatrixXd dev = h_.rowwise() - mean.transpose();
  st.hessian = dev.transpose() * p.asDiagonal() * dev;
  return st;
}

double log_partition(const Support& support, std::span<const ConstraintFunction> functions,
                     std::span<const double> multipliers) {
  if (functions.size() != multipliers.size())
    throw ValidationError("multiplier count does not match constraints");
  for (double l : multipliers)
    if (!std::isfinite(l)) throw ValidationError("multipliers must be finite");
  const auto e = exponents(support, functions, multipliers);
  const auto w = support.weights();
  Eigen::VectorXd s(static_cast<Eigen::Index>(e.size()));
  for (std::size_t i = 0; i < e.size(); ++i) s[static_cast<Eigen::Index>(i)] = e[i] + std::log(w[i]);
  return log_sum_exp(s);
}

MaxEntSolution solve_equality(const Problem& problem, const SolverOptions& options) {
  const Problem p = validate_problem(problem);
  std::vector<double> targets;
  for (const auto& c : p.constraints) {
    if (!c.is_equality()) throw ValidationError("solve_equality requires equality targets");
    targets.push_back(c.value());
  }
  const auto functions = functions_of(p.constraints);
  for (std::size_t j = 0; j < functions.size(); ++j)
    check_attainable(p.support, functions[j], targets[j], j);

  const double tol = options.tolerance_for(p.support);
  const DualProblem dual(p.support, functions, targets);
  NewtonResult nr = newton(dual, tol, options);

  auto a = assemble(p.support, functions,
                    std::vector<double>(nr.lambda.data(), nr.lambda.data() + nr.lambda.size()));
  SolverDiagnostics diag;
  diag.iterations = nr.iterations;
  diag.outer_iterations = 1;
  diag.gradient_max_norm = nr.gradient_max_norm;
  diag.dual_trace = std::move(nr.trace);
  for (std::size_t j = 0; j < targets.size(); ++j) {
    diag.residuals.push_back(a.moments[j] - targets[j]);
    diag.active.push_back(ActiveBound::equality);
  }
  const double h = entropy_of(p.support, a.density);
  return MaxEntSolution(p.support, p.constraints, std::move(a.lambda), a.log_partition,
                        std::move(a.density), h, std::move(diag));
}

MaxEntSolution solve_interval(const Problem& problem, const SolverOptions& options) {
  const Problem p = validate_problem(problem);
  const std::size_t m = p.constraints.size();
  const auto functions = functions_of(p.constraints);
  const double tol = options.tolerance_for(p.support);

  std::vector<ActiveBound> state(m, ActiveBound::none);
  for (std::size_t j = 0; j < m; ++j) {
    const auto& c = p.constraints[j];
    if (c.is_equality() || c.interval().lo == c.interval().hi) state[j] = ActiveBound::equality;
  }

  auto bound_value = [&](std::size_t j) {
    const auto& c = p.constraints[j];
    if (c.is_equality()) return c.value();
    return state[j] == ActiveBound::upper ? c.interval().hi : c.interval().lo;
  };

  std::set<std::vector<ActiveBound>> visited;
  int total_iterations = 0;
  for (int pass = 1; pass <= options.max_active_set_passes; ++pass) {
    if (!visited.insert(state).second)
      throw InfeasibleError("active-set cycle: an active set recurred after " +
                            std::to_string(pass - 1) + " passes");

    std::vector<std::size_t> held;
    std::vector<ConstraintFunction> sub_functions;
    std::vector<double> sub_targets;
    for (std::size_t j = 0; j < m; ++j) {
      if (state[j] == ActiveBound::none) continue;
      held.push_back(j);
      sub_functions.push_back(functions[j]);
      sub_targets.push_back(bound_value(j));
      check_attainable(p.support, functions[j], sub_targets.back(), j);
    }
    const DualProblem dual(p.support, sub_functions, sub_targets);
    NewtonResult nr = newton(dual, tol, options);
    total_iterations += nr.iterations;

    std::vector<double> lambda(m, 0.0);
    for (std::size_t k = 0; k < held.size(); ++k) lambda[held[k]] = nr.lambda[static_cast<Eigen::Index>(k)];
    auto a = assemble(p.support, functions, lambda);

    // Complementary slackness: lambda > 0 pushes E[h] down (upper bound),
    // lambda < 0 pushes it up (lower bound). Release the worst offender.
    std::size_t worst = m;
    double worst_size = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      double wrong = 0.0;
      if (state[j] == ActiveBound::lower && lambda[j] > 0.0) wrong = lambda[j];
      if (state[j] == ActiveBound::upper && lambda[j] < 0.0) wrong = -lambda[j];
      if (wrong > worst_size) {
        worst_size = wrong;
        worst = j;
      }
    }
    if (worst < m) {
      state[worst] = ActiveBound::none;
      continue;
    }

    bool activated = false;
    for (std::size_t j = 0; j < m; ++j) {
      if (state[j] != ActiveBound::none) continue;
      const auto iv = p.constraints[j].interval();
      if (a.moments[j] < iv.lo - tol) {
        state[j] = ActiveBound::lower;
        activated = true;
      } else if (a.moments[j] > iv.hi + tol) {
        state[j] = ActiveBound::upper;
        activated = true;
      }
    }
    if (activated) continue;

    SolverDiagnostics diag;
    diag.iterations = total_iterations;
    diag.outer_iterations = pass;
    diag.gradient_max_norm = nr.gradient_max_norm;
    diag.dual_trace = std::move(nr.trace);
    diag.active = state;
    for (std::size_t j = 0; j < m; ++j) {
      const auto& c = p.constraints[j];
      if (c.is_equality()) {
        diag.residuals.push_back(a.moments[j] - c.value());
      } else {
        const auto iv = c.interval();
        diag.residuals.push_back(a.moments[j] - std::clamp(a.moments[j], iv.lo, iv.hi));
      }
    }
    const double h = entropy_of(p.support, a.density);
    return MaxEntSolution(p.support, p.constraints, std::move(a.lambda), a.log_partition,
                          std::move(a.density), h, std::move(diag));
  }
  throw InfeasibleError("active-set cycle: no fixpoint after " +
                        std::to_string(options.max_active_set_passes) + " passes");
}

MaxEntSolution solve(const Problem& problem, const SolverOptions& options) {
  const bool all_equal = std::all_of(problem.constraints.begin(), problem.constraints.end(),
                                     [](const ConstraintSpec& c) { return c.is_equality(); });
  return all_equal ? solve_equality(problem, options) : solve_interval(problem, options);
}

std::vector<double> moments(const MaxEntSolution& solution,
                            std::span<const ConstraintFunction> functions) {
  const auto& support = solution.support();
  const auto p = solution.density();
  const auto w = support.weights();
  std::vector<double> out;
  out.reserve(functions.size());
  for (const auto& f : functions) {
    if (f.kind() == ConstraintFunction::Kind::tabulated && f.table().size() != support.size())
      throw ValidationError("support mismatch: tabulated function has " +
                            std::to_string(f.table().size()) + " values for " +
                            std::to_string(support.size()) + " nodes");
    const auto h = f.tabulate(support);
    double e = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) e += w[i] * p[i] * h[i];
    out.push_back(e);
  }
  return out;
}

}  // namespace maxent
