#include "maxent/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>

namespace maxent::quadrature {

namespace {

template <unsigned Order>
ReferenceRule make_rule() {
  using Gauss = boost::math::quadrature::gauss<double, Order>;
  static_assert(Order % 2 == 0);
  const auto& x = Gauss::abscissa();
  const auto& w = Gauss::weights();
  ReferenceRule rule;
  for (std::size_t i = x.size(); i-- > 0;) {
    rule.nodes.push_back(-x[i]);
    rule.weights.push_back(w[i]);
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    rule.nodes.push_back(x[i]);
    rule.weights.push_back(w[i]);
  }
  return rule;
}

// Integrals of the Lagrange basis polynomials over [-1, tau]. The panel rule
// itself integrates them exactly (degree order-1 < 2*order).
struct PanelIntegrator {
  const ReferenceRule* rule = nullptr;
  std::vector<double> bary;                    // 1 / prod_{k!=j} (t_j - t_k)
  std::vector<std::vector<double>> at_nodes;   // row i: integrals over [-1, t_i]

  explicit PanelIntegrator(int order) : rule(&gauss_legendre(order)) {
    const auto& t = rule->nodes;
    bary.resize(t.size());
    for (std::size_t j = 0; j < t.size(); ++j) {
      double prod = 1.0;
      for (std::size_t k = 0; k < t.size(); ++k)
        if (k != j) prod *= t[j] - t[k];
      bary[j] = 1.0 / prod;
    }
    for (double tau : t) at_nodes.push_back(partial(tau));
  }

  double basis(std::size_t j, double s) const {
    const auto& t = rule->nodes;
    double prod = bary[j];
    for (std::size_t k = 0; k < t.size(); ++k)
      if (k != j) prod *= s - t[k];
    return prod;
  }

  std::vector<double> partial(double tau) const {
    const auto& t = rule->nodes;
    const auto& w = rule->weights;
    std::vector<double> out(t.size(), 0.0);
    const double half = 0.5 * (tau + 1.0);
    for (std::size_t q = 0; q < t.size(); ++q) {
      const double s = -1.0 + half * (t[q] + 1.0);
      for (std::size_t j = 0; j < t.size(); ++j) out[j] += half * w[q] * basis(j, s);
    }
    return out;
  }
};

const PanelIntegrator& integrator(int order) {
  if (order == 16) {
    static const PanelIntegrator p16(16);
    return p16;
  }
  if (order == 32) {
    static const PanelIntegrator p32(32);
    return p32;
  }
  throw ValidationError("unsupported Gauss-Legendre order " + std::to_string(order));
}

void require_continuous(const Support& support, std::span<const double> values) {
  if (!support.is_continuous()) throw ValidationError("continuous support required");
  if (values.size() != support.size()) throw ValidationError("value count does not match support size");
}

}  // namespace

const ReferenceRule& gauss_legendre(int order) {
  if (order == 16) {
    static const ReferenceRule r16 = make_rule<16>();
    return r16;
  }
  if (order == 32) {
    static const ReferenceRule r32 = make_rule<32>();
    return r32;
  }
  throw ValidationError("unsupported Gauss-Legendre order " + std::to_string(order));
}

std::vector<double> cumulative(const Support& support, std::span<const double> values) {
  require_continuous(support, values);
  const int order = support.panel_order();
  const auto& pi = integrator(order);
  const auto edges = support.panel_edges();
  const auto w = support.weights();

  std::vector<double> out(values.size());
  double before = 0.0;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double half = 0.5 * (edges[p + 1] - edges[p]);
    const std::size_t base = p * order;
    for (int i = 0; i < order; ++i) {
      double acc = 0.0;
      for (int j = 0; j < order; ++j) acc += pi.at_nodes[i][j] * values[base + j];
      out[base + i] = before + half * acc;
    }
    for (int j = 0; j < order; ++j) before += w[base + j] * values[base + j];
  }
  return out;
}

double integral_to(const Support& support, std::span<const double> values, double x) {
  require_continuous(support, values);
  const auto edges = support.panel_edges();
  if (x <= edges.front()) return 0.0;
  const int order = support.panel_order();
  const auto w = support.weights();

  double before = 0.0;
  std::size_t p = 0;
  for (; p + 1 < edges.size(); ++p) {
    if (x <= edges[p + 1]) break;
    for (int j = 0; j < order; ++j) before += w[p * order + j] * values[p * order + j];
  }
  if (p + 1 == edges.size()) return before;
  if (x == edges[p + 1]) {
    for (int j = 0; j < order; ++j) before += w[p * order + j] * values[p * order + j];
    return before;
  }
  const double half = 0.5 * (edges[p + 1] - edges[p]);
  const double tau = (x - edges[p]) / half - 1.0;
  const auto part = integrator(order).partial(tau);
  double acc = 0.0;
  for (int j = 0; j < order; ++j) acc += part[j] * values[p * order + j];
  return before + half * acc;
}

namespace {

double three_point(double xm, double x0, double xp, double fm, double f0, double fp) {
  const double h1 = x0 - xm;
  const double h2 = xp - x0;
  return -h2 / (h1 * (h1 + h2)) * fm + (h2 - h1) / (h1 * h2) * f0 + h1 / (h2 * (h1 + h2)) * fp;
}

}  // namespace

std::vector<double> derivative(std::span<const double> x, std::span<const double> f,
                               double x_left, double f_left,
                               double x_right, double f_right) {
  const std::size_t n = x.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double xm = i == 0 ? x_left : x[i - 1];
    const double fm = i == 0 ? f_left : f[i - 1];
    const double xp = i + 1 == n ? x_right : x[i + 1];
    const double fp = i + 1 == n ? f_right : f[i + 1];
    out[i] = three_point(xm, x[i], xp, fm, f[i], fp);
  }
  return out;
}

std::vector<double> interior_derivative(std::span<const double> x, std::span<const double> f) {
  const std::size_t n = x.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i)
    out[i] = three_point(x[i - 1], x[i], x[i + 1], f[i - 1], f[i], f[i + 1]);
  return out;
}

}  // namespace maxent::quadrature
