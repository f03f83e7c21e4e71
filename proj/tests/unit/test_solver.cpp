#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "maxent/entropy.hpp"
#include "maxent/solver.hpp"
#include "support/oracles.hpp"

using namespace maxent;

namespace {

ConstraintSpec mean_is(double b, int k = 1) {
  return ConstraintSpec::equality(ConstraintFunction::power(k), b);
}

ConstraintSpec mean_in(double lo, double hi, int k = 1) {
  return ConstraintSpec::bounded(ConstraintFunction::power(k), lo, hi);
}

std::string infeasible_message(const Problem& p, const SolverOptions& o = {}) {
  try {
    solve(p, o);
  } catch (const InfeasibleError& e) {
    return e.what();
  }
  return {};
}

struct RandomDual {
  Support support;
  std::vector<ConstraintFunction> functions;
  std::vector<double> targets;
  Eigen::VectorXd lambda;
};

RandomDual random_dual(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> m_dist(1, 3);
  const bool discrete = rng() % 2 == 0;
  Support support = [&] {
    if (!discrete) {
      const double a = 2 * u(rng);
      return Support::continuous(a, a + 1.0 + std::abs(u(rng)), 128);
    }
    std::vector<double> pts;
    double x = u(rng);
    for (int i = 0; i < 3 + static_cast<int>(rng() % 5); ++i) pts.push_back(x += 0.1 + std::abs(u(rng)));
    return Support::discrete(pts);
  }();
  RandomDual r{support, {}, {}, {}};
  const int m = m_dist(rng);
  for (int j = 0; j < m; ++j) {
    if (j == 2 && discrete) {
      std::vector<double> t(support.size());
      for (double& v : t) v = u(rng);
      r.functions.push_back(ConstraintFunction::tabulated(t));
    } else {
      r.functions.push_back(ConstraintFunction::power(j + 1));
    }
    r.targets.push_back(u(rng));
  }
  r.lambda = Eigen::VectorXd::NullaryExpr(m, [&] { return 0.8 * u(rng); });
  return r;
}

}  // namespace

TEST(LogPartition, Examples) {
  const auto pair = Support::discrete({0, 1});
  EXPECT_NEAR(log_partition(pair, {}, {}), std::log(2.0), 1e-15);
  const std::vector<ConstraintFunction> x{ConstraintFunction::power(1)};
  EXPECT_NEAR(log_partition(pair, x, std::vector<double>{0.0}), std::log(2.0), 1e-15);
  EXPECT_NEAR(log_partition(Support::continuous(0, 1), {}, {}), 0.0, 1e-14);
}

TEST(LogPartition, StableForLargeExponents) {
  const auto s = Support::discrete({0, 1, 2});
  const std::vector<ConstraintFunction> x{ConstraintFunction::power(1)};
  // Sum of exp(-(-350) x): dominated by exp(700).
  const double lz = log_partition(s, x, std::vector<double>{-350.0});
  EXPECT_TRUE(std::isfinite(lz));
  EXPECT_NEAR(lz, 700.0 + std::log1p(std::exp(-350.0) + std::exp(-700.0)), 1e-12);
  EXPECT_NEAR(log_partition(s, x, std::vector<double>{350.0}), std::log1p(std::exp(-350.0)), 1e-15);
}

TEST(SolveEquality, SymmetricPairIsUniform) {
  const auto sol = solve_equality({Support::discrete({0, 1}), {mean_is(0.5)}});
  EXPECT_NEAR(sol.density()[0], 0.5, 1e-12);
  EXPECT_NEAR(sol.multipliers()[0], 0.0, 1e-12);
}

TEST(SolveEquality, SkewedPairMatchesBisectionOracle) {
  const auto sol = solve_equality({Support::discrete({0, 1}), {mean_is(0.75)}});
  EXPECT_NEAR(sol.density()[0], 0.25, 1e-9);
  EXPECT_NEAR(sol.density()[1], 0.75, 1e-9);
  const double oracle = oracle::two_point_multiplier(0.75);
  EXPECT_NEAR(oracle, -std::log(3.0), 1e-12);
  EXPECT_NEAR(sol.multipliers()[0], oracle, 1e-8);
}

TEST(SolveEquality, NoConstraintsGivesUniform) {
  const auto sol = solve_equality({Support::discrete({-3, -1, 0.5, 2, 2.5, 7, 11}), {}});
  for (double p : sol.density()) EXPECT_NEAR(p, 1.0 / 7, 1e-15);
  EXPECT_NEAR(sol.entropy(), std::log(7.0), 1e-14);
  EXPECT_EQ(sol.diagnostics().iterations, 0);
}

TEST(SolveEquality, TruncatedExponential) {
  const auto sol = solve_equality({Support::continuous(0, 5), {mean_is(1.0)}});
  const double oracle = oracle::truncated_exponential_rate(1.0, 0, 5);
  EXPECT_NEAR(oracle, 0.96020150994450357, 1e-12);  // mpmath, 30 digits
  EXPECT_NEAR(sol.multipliers()[0], oracle, 1e-6);
  EXPECT_LE(std::abs(sol.diagnostics().residuals[0]), 1e-8);
  EXPECT_NEAR(sol.log_partition(), 0.032356668427112990, 1e-10);
  EXPECT_NEAR(sol.entropy(), 0.99255817837161656, 1e-10);
}

TEST(SolveEquality, TruncatedGaussian) {
  const auto sol = solve_equality({Support::continuous(-4, 4), {mean_is(0.0), mean_is(1.0, 2)}});
  const std::vector<ConstraintFunction> f{ConstraintFunction::power(1), ConstraintFunction::power(2)};
  const auto m = moments(sol, f);
  EXPECT_NEAR(m[0], 0.0, 1e-8);
  EXPECT_NEAR(m[1], 1.0, 1e-8);
  EXPECT_NEAR(sol.multipliers()[0], 0.0, 1e-10);
  EXPECT_NEAR(sol.multipliers()[1], 0.49946029342185216, 1e-8);  // mpmath root
}

TEST(SolveEquality, UnattainableTargets) {
  EXPECT_NE(infeasible_message({Support::continuous(0, 1), {mean_is(2.0)}}).find("infeasible or unbounded"),
            std::string::npos);
  EXPECT_NE(infeasible_message({Support::discrete({0, 1}), {mean_is(1.0)}}).find("degenerate"),
            std::string::npos);
  // Each moment is attainable on its own, but the variance would be negative.
  EXPECT_NE(infeasible_message({Support::discrete({0, 1, 2}), {mean_is(1.9), mean_is(1.0, 2)}})
                .find("infeasible or unbounded"),
            std::string::npos);
  SolverOptions few;
  few.max_iter = 1;
  EXPECT_NE(infeasible_message({Support::continuous(-4, 4), {mean_is(0.5), mean_is(1.0, 2)}}, few)
                .find("no convergence"),
            std::string::npos);
  EXPECT_THROW(solve_equality({Support::discrete({0, 1}), {mean_in(0.2, 0.4)}}), ValidationError);
}

TEST(SolveInterval, SlackConstraintKeepsUniform) {
  const auto sol = solve_interval({Support::discrete({0, 1}), {mean_in(0.25, 0.75)}});
  EXPECT_NEAR(sol.density()[0], 0.5, 1e-15);
  EXPECT_EQ(sol.multipliers()[0], 0.0);
  EXPECT_EQ(sol.diagnostics().active[0], ActiveBound::none);
  EXPECT_EQ(sol.diagnostics().residuals[0], 0.0);
}

TEST(SolveInterval, LowerBoundActive) {
  const auto sol = solve_interval({Support::discrete({0, 1}), {mean_in(0.7, 0.9)}});
  EXPECT_NEAR(sol.density()[0], 0.3, 1e-9);
  EXPECT_NEAR(sol.density()[1], 0.7, 1e-9);
  EXPECT_NEAR(sol.multipliers()[0], oracle::two_point_multiplier(0.7), 1e-8);
  EXPECT_NEAR(sol.multipliers()[0], -std::log(7.0 / 3.0), 1e-8);
  EXPECT_EQ(sol.diagnostics().active[0], ActiveBound::lower);
}

TEST(SolveInterval, UpperBoundActive) {
  const auto sol = solve_interval({Support::discrete({0, 1}), {mean_in(0.1, 0.3)}});
  EXPECT_NEAR(sol.density()[1], 0.3, 1e-9);
  EXPECT_GT(sol.multipliers()[0], 0.0);
  EXPECT_EQ(sol.diagnostics().active[0], ActiveBound::upper);
}

TEST(SolveInterval, ContinuousSlack) {
  const auto sol = solve_interval({Support::continuous(0, 1), {mean_in(0.4, 0.6)}});
  for (double p : sol.density()) EXPECT_NEAR(p, 1.0, 1e-12);
  EXPECT_NEAR(sol.entropy(), 0.0, 1e-12);
}

TEST(SolveInterval, DegenerateIntervalMatchesEquality) {
  const auto support = Support::continuous(-1, 2, 512);
  const auto eq = solve_equality({support, {mean_is(0.2), mean_is(0.9, 2)}});
  const auto iv = solve_interval({support, {mean_in(0.2, 0.2), mean_in(0.9, 0.9, 2)}});
  for (std::size_t i = 0; i < support.size(); ++i)
    EXPECT_NEAR(eq.density()[i], iv.density()[i], 1e-8);
  EXPECT_EQ(iv.diagnostics().active[0], ActiveBound::equality);
}

TEST(SolveInterval, MixedEqualityAndInterval) {
  // Mean fixed at 0.3; the second moment bound binds from above.
  const auto sol = solve({Support::continuous(0, 1), {mean_is(0.3), mean_in(0.0, 0.12, 2)}});
  const std::vector<ConstraintFunction> f{ConstraintFunction::power(1), ConstraintFunction::power(2)};
  const auto m = moments(sol, f);
  EXPECT_NEAR(m[0], 0.3, 1e-8);
  EXPECT_NEAR(m[1], 0.12, 1e-8);
  EXPECT_EQ(sol.diagnostics().active[1], ActiveBound::upper);
  EXPECT_GT(sol.multipliers()[1], 0.0);
}

TEST(SolveInterval, PassCapReportsCycle) {
  SolverOptions opts;
  opts.max_active_set_passes = 1;
  EXPECT_NE(infeasible_message({Support::discrete({0, 1}), {mean_in(0.7, 0.9)}}, opts).find("active-set"),
            std::string::npos);
}

TEST(SolveInterval, RandomProblemsSatisfyKkt) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto support = Support::discrete({0, 1, 2, 3, 4});
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<ConstraintSpec> cs;
    for (int k = 1; k <= 2; ++k) {
      // Intervals around values attainable by some positive density.
      const double lo_x = 0.2 + 3.6 * u(rng);
      const double c = k == 1 ? lo_x : lo_x * lo_x + 0.3 + u(rng);
      const double w = 0.5 * u(rng);
      cs.push_back(mean_in(c - w, c + w, k));
    }
    MaxEntSolution sol = [&] {
      try {
        return solve_interval({support, cs});
      } catch (const InfeasibleError&) {
        return solve_interval({support, {cs[0]}});  // jointly infeasible draw
      }
    }();
    const auto& d = sol.diagnostics();
    const auto f = functions_of(sol.constraints());
    const auto m = moments(sol, f);
    for (std::size_t j = 0; j < sol.constraints().size(); ++j) {
      const auto iv = sol.constraints()[j].interval();
      EXPECT_GE(m[j], iv.lo - 1e-9);
      EXPECT_LE(m[j], iv.hi + 1e-9);
      const double l = sol.multipliers()[j];
      switch (d.active[j]) {
        case ActiveBound::none: EXPECT_EQ(l, 0.0); break;
        case ActiveBound::lower: EXPECT_LE(l, 0.0); EXPECT_NEAR(m[j], iv.lo, 1e-9); break;
        case ActiveBound::upper: EXPECT_GE(l, 0.0); EXPECT_NEAR(m[j], iv.hi, 1e-9); break;
        case ActiveBound::equality: break;
      }
    }
  }
}

TEST(Moments, Examples) {
  const auto pair = solve({Support::discrete({0, 1}), {}});
  EXPECT_NEAR(moments(pair, std::vector<ConstraintFunction>{ConstraintFunction::power(1)})[0], 0.5, 1e-15);
  const auto unit = solve({Support::continuous(0, 1), {}});
  EXPECT_NEAR(moments(unit, std::vector<ConstraintFunction>{ConstraintFunction::power(2)})[0], 1.0 / 3, 1e-14);
  EXPECT_THROW(moments(unit, std::vector<ConstraintFunction>{ConstraintFunction::tabulated({1, 2})}),
               ValidationError);

  const auto sol = solve({Support::continuous(-1, 3, 256), {mean_is(0.4), mean_is(1.1, 2), mean_is(0.9, 3)}});
  const auto m = moments(sol, functions_of(sol.constraints()));
  EXPECT_NEAR(m[0], 0.4, 1e-8);
  EXPECT_NEAR(m[1], 1.1, 1e-8);
  EXPECT_NEAR(m[2], 0.9, 1e-8);
}

TEST(DualProperties, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const auto r = random_dual(rng);
    const DualProblem dual(r.support, r.functions, r.targets);
    const auto st = dual.evaluate(r.lambda);
    for (Eigen::Index j = 0; j < r.lambda.size(); ++j) {
      const double h = 1e-5;
      Eigen::VectorXd up = r.lambda, dn = r.lambda;
      up[j] += h;
      dn[j] -= h;
      const double fd = (dual.value(up) - dual.value(dn)) / (2 * h);
      EXPECT_LE(std::abs(fd - st.gradient[j]), 1e-6 * std::max(1.0, std::abs(st.gradient[j])));
    }
  }
}

TEST(DualProperties, HessianMatchesFiniteDifferencesAndIsPsd) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const auto r = random_dual(rng);
    const DualProblem dual(r.support, r.functions, r.targets);
    const auto st = dual.evaluate(r.lambda);
    EXPECT_TRUE(st.hessian.isApprox(st.hessian.transpose(), 1e-14));
    for (Eigen::Index j = 0; j < r.lambda.size(); ++j) {
      const double h = 1e-5;
      Eigen::VectorXd up = r.lambda, dn = r.lambda;
      up[j] += h;
      dn[j] -= h;
      const Eigen::VectorXd fd = (dual.evaluate(up).gradient - dual.evaluate(dn).gradient) / (2 * h);
      for (Eigen::Index k = 0; k < r.lambda.size(); ++k)
        EXPECT_LE(std::abs(fd[k] - st.hessian(k, j)), 1e-5 * std::max(1.0, std::abs(st.hessian(k, j))));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(st.hessian);
    EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-10);
  }
}

TEST(DualProperties, DualDecreasesAcrossNewtonSteps) {
  const std::vector<Problem> problems{
      {Support::continuous(0, 5), {mean_is(1.0)}},
      {Support::continuous(-4, 4), {mean_is(0.7), mean_is(1.5, 2)}},
      {Support::discrete({0, 1, 2, 3}), {mean_is(2.6)}},
      {Support::continuous(-1, 3, 256), {mean_is(0.4), mean_is(1.1, 2), mean_is(0.9, 3)}},
  };
  for (const auto& p : problems) {
    const auto sol = solve(p);
    const auto& trace = sol.diagnostics().dual_trace;
    ASSERT_FALSE(trace.empty());
    for (std::size_t k = 1; k < trace.size(); ++k)
      EXPECT_LE(trace[k], trace[k - 1] + 1e-14 * std::max(1.0, std::abs(trace[k - 1])));
    EXPECT_LT(sol.diagnostics().iterations, 20);
  }
}

TEST(SolverProperties, BeatsEveryFeasibleSimplexGridPoint) {
  struct Case { std::vector<double> points; double target; };
  const std::vector<Case> cases{
      {{0, 1}, 0.3}, {{0, 1, 2}, 0.6}, {{0, 1, 2}, 1.45}, {{0, 1, 2, 3}, 1.2}, {{0, 1, 2, 3}, 2.31},
  };
  for (const auto& c : cases) {
    const auto sol = solve({Support::discrete(c.points), {mean_is(c.target)}});
    const double h = sol.entropy();
    double best = -1.0;
    std::vector<double> best_p;
    oracle::for_each_simplex_point(static_cast<int>(c.points.size()), 100, [&](const std::vector<double>& p) {
      double mean = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) mean += c.points[i] * p[i];
      if (std::abs(mean - c.target) > 1e-9) return;
      const double hp = oracle::shannon(p);
      EXPECT_LE(hp, h + 1e-6);
      if (hp > best) {
        best = hp;
        best_p = p;
      }
    });
    ASSERT_FALSE(best_p.empty());
    double l1 = 0.0;
    for (std::size_t i = 0; i < best_p.size(); ++i) l1 += std::abs(best_p[i] - sol.density()[i]);
    EXPECT_LE(l1, 0.02) << "target " << c.target;
  }
}

TEST(SolverProperties, DominatesIndependentlyBuiltFeasibleMasses) {
  std::mt19937_64 rng(9);
  const std::vector<double> pts{0, 0.5, 1.5, 2, 4, 5};
  const double b = 1.7;
  const auto sol = solve({Support::discrete(pts), {mean_is(b)}});
  std::exponential_distribution<double> e(1.0);
  for (int trial = 0; trial < 500; ++trial) {
    // Random mass r mixed with a point mass on the far side of b.
    std::vector<double> r(pts.size());
    double s = 0.0;
    for (double& v : r) s += (v = e(rng));
    double mr = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) mr += pts[i] * (r[i] /= s);
    const std::size_t k = mr > b ? 0 : pts.size() - 1;
    const double alpha = (pts[k] - b) / (pts[k] - mr);
    std::vector<double> q(r.size());
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = alpha * r[i] + (i == k ? 1.0 - alpha : 0.0);
    EXPECT_LE(oracle::shannon(q), sol.entropy() + 1e-9);
  }
}

TEST(SolverProperties, StoredDensityIsReproducedByMultipliers) {
  const std::vector<Problem> problems{
      {Support::continuous(0, 5), {mean_is(1.0)}},
      {Support::continuous(-4, 4), {mean_is(0.0), mean_is(1.0, 2)}},
      {Support::discrete({0, 1, 2, 3}), {mean_in(2.5, 2.8)}},
  };
  for (const auto& p : problems) {
    const auto sol = solve(p);
    const auto f = functions_of(sol.constraints());
    const auto rebuilt = exponential_density(sol.support(), f, sol.multipliers(), sol.log_partition());
    for (std::size_t i = 0; i < rebuilt.size(); ++i)
      EXPECT_LE(std::abs(rebuilt[i] - sol.density()[i]), 1e-12 * sol.density()[i]);
    EXPECT_NEAR(sol.support().integrate(sol.density()), 1.0, 1e-12);
  }
}
