#include "maxent/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "maxent/quadrature.hpp"

namespace maxent {

namespace {

[[noreturn]] void fail(const std::string& what) { throw ValidationError(what); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Splits `panels` panels across segments proportionally to their lengths,
// giving every segment at least one.
std::vector<int> allocate_panels(std::span<const double> cuts, int panels) {
  const std::size_t segments = cuts.size() - 1;
  const double total = cuts.back() - cuts.front();
  std::vector<double> share(segments);
  std::vector<int> alloc(segments);
  for (std::size_t s = 0; s < segments; ++s) {
    share[s] = panels * (cuts[s + 1] - cuts[s]) / total;
    alloc[s] = std::max(1, static_cast<int>(std::floor(share[s])));
  }
  int used = std::accumulate(alloc.begin(), alloc.end(), 0);
  while (used < panels) {
    std::size_t best = 0;
    for (std::size_t s = 1; s < segments; ++s)
      if (share[s] / alloc[s] > share[best] / alloc[best]) best = s;
    ++alloc[best];
    ++used;
  }
  while (used > panels) {
    std::size_t best = segments;
    for (std::size_t s = 0; s < segments; ++s) {
      if (alloc[s] == 1) continue;
      if (best == segments || share[s] / alloc[s] < share[best] / alloc[best]) best = s;
    }
    --alloc[best];
    --used;
  }
  return alloc;
}

}  // namespace

Support Support::discrete(std::vector<double> points) {
  if (points.size() < 2) fail("discrete support needs at least 2 points");
  for (double p : points)
    if (!std::isfinite(p)) fail("discrete support point is not finite");
  for (std::size_t i = 1; i < points.size(); ++i)
    if (!(points[i - 1] < points[i])) fail("discrete support points must be strictly increasing");

  Support s;
  s.kind_ = SupportKind::discrete;
  s.lower_ = points.front();
  s.upper_ = points.back();
  s.weights_.assign(points.size(), 1.0);
  s.nodes_ = std::move(points);
  return s;
}

Support Support::continuous(double a, double b, int nodes,
                            std::span<const double> breakpoints) {
  if (!std::isfinite(a) || !std::isfinite(b)) fail("continuous support bounds must be finite");
  if (!(a < b)) fail("continuous support needs a < b");
  if (nodes < kMinNodes) fail("continuous support needs at least 16 nodes");
  if (nodes % 16 != 0) fail("continuous node count must be a multiple of 16");

  std::vector<double> cuts{a};
  std::vector<double> sorted(breakpoints.begin(), breakpoints.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (double c : sorted) {
    if (!std::isfinite(c) || c <= a || c >= b) fail("breakpoint " + fmt(c) + " is not inside (a, b)");
    cuts.push_back(c);
  }
  cuts.push_back(b);

  const std::size_t segments = cuts.size() - 1;
  int order = nodes % 32 == 0 ? 32 : 16;
  if (static_cast<std::size_t>(nodes / order) < segments) order = 16;
  const int panels = nodes / order;
  if (static_cast<std::size_t>(panels) < segments)
    fail("too few nodes for " + std::to_string(sorted.size()) + " breakpoints");

  const auto alloc = allocate_panels(cuts, panels);
  const auto& rule = quadrature::gauss_legendre(order);

  Support s;
  s.kind_ = SupportKind::continuous;
  s.lower_ = a;
  s.upper_ = b;
  s.order_ = order;
  s.breakpoints_ = std::move(sorted);
  s.edges_.reserve(panels + 1);
  s.edges_.push_back(a);
  for (std::size_t seg = 0; seg < segments; ++seg) {
    const double lo = cuts[seg];
    const double hi = cuts[seg + 1];
    for (int k = 1; k <= alloc[seg]; ++k)
      s.edges_.push_back(k == alloc[seg] ? hi : lo + (hi - lo) * k / alloc[seg]);
  }

  s.nodes_.reserve(nodes);
  s.weights_.reserve(nodes);
  for (int p = 0; p < panels; ++p) {
    const double mid = 0.5 * (s.edges_[p] + s.edges_[p + 1]);
    const double half = 0.5 * (s.edges_[p + 1] - s.edges_[p]);
    for (int q = 0; q < order; ++q) {
      s.nodes_.push_back(mid + half * rule.nodes[q]);
      s.weights_.push_back(half * rule.weights[q]);
    }
  }
  return s;
}

double Support::integrate(std::span<const double> values) const {
  if (values.size() != nodes_.size()) fail("value count does not match support size");
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) sum += weights_[i] * values[i];
  return sum;
}

ConstraintFunction ConstraintFunction::power(int exponent) {
  if (exponent < 1) fail("power constraint needs exponent k >= 1");
  ConstraintFunction f;
  f.kind_ = Kind::power;
  f.exponent_ = exponent;
  return f;
}

ConstraintFunction ConstraintFunction::indicator(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
    fail("indicator needs finite c < d");
  ConstraintFunction f;
  f.kind_ = Kind::indicator;
  f.lo_ = lo;
  f.hi_ = hi;
  return f;
}

ConstraintFunction ConstraintFunction::tabulated(std::vector<double> values,
                                                 std::vector<double> derivative) {
  for (double v : values)
    if (!std::isfinite(v)) fail("tabulated constraint values must be finite");
  for (double v : derivative)
    if (!std::isfinite(v)) fail("tabulated derivative values must be finite");
  if (!derivative.empty() && derivative.size() != values.size())
    fail("tabulated derivative must have one value per node");
  ConstraintFunction f;
  f.kind_ = Kind::tabulated;
  f.table_ = std::move(values);
  f.derivative_ = std::move(derivative);
  return f;
}

double ConstraintFunction::operator()(double x) const {
  switch (kind_) {
    case Kind::power: {
      double r = x;
      for (int k = 1; k < exponent_; ++k) r *= x;
      return r;
    }
    case Kind::indicator:
      return (lo_ <= x && x <= hi_) ? 1.0 : 0.0;
    case Kind::tabulated:
      break;
  }
  fail("tabulated constraint has no pointwise value");
}

std::vector<double> ConstraintFunction::tabulate(const Support& support) const {
  if (kind_ == Kind::tabulated) {
    if (table_.size() != support.size())
      fail("tabulated constraint has " + std::to_string(table_.size()) +
           " values for a support of " + std::to_string(support.size()) + " nodes");
    return table_;
  }
  std::vector<double> out(support.size());
  const auto x = support.nodes();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*this)(x[i]);
  return out;
}

std::vector<double> ConstraintFunction::tabulate_derivative(const Support& support) const {
  const auto x = support.nodes();
  std::vector<double> out(support.size(), 0.0);
  switch (kind_) {
    case Kind::power:
      for (std::size_t i = 0; i < out.size(); ++i) {
        double r = exponent_;
        for (int k = 1; k < exponent_; ++k) r *= x[i];
        out[i] = r;
      }
      break;
    case Kind::indicator:
      break;
    case Kind::tabulated:
      if (derivative_.empty()) fail("tabulated constraint has no derivative");
      if (derivative_.size() != support.size()) fail("tabulated derivative does not match support");
      out = derivative_;
      break;
  }
  return out;
}

std::string ConstraintFunction::describe() const {
  switch (kind_) {
    case Kind::power:
      return exponent_ == 1 ? "x" : "x^" + std::to_string(exponent_);
    case Kind::indicator:
      return "1[" + fmt(lo_) + "," + fmt(hi_) + "]";
    case Kind::tabulated:
      return "tabulated";
  }
  return {};
}

ConstraintSpec ConstraintSpec::equality(ConstraintFunction f, double value) {
  return ConstraintSpec{std::move(f), value};
}

ConstraintSpec ConstraintSpec::bounded(ConstraintFunction f, double lo, double hi) {
  return ConstraintSpec{std::move(f), Interval{lo, hi}};
}

Problem validate_problem(Support support, std::vector<ConstraintSpec> constraints) {
  const double a = support.lower();
  const double b = support.upper();
  for (std::size_t j = 0; j < constraints.size(); ++j) {
    const auto& c = constraints[j];
    const std::string tag = "constraint " + std::to_string(j + 1) + ": ";
    const auto& f = c.function;
    switch (f.kind()) {
      case ConstraintFunction::Kind::power:
        if (f.exponent() < 1) fail(tag + "power exponent must be >= 1");
        break;
      case ConstraintFunction::Kind::indicator:
        if (f.lo() < a || f.hi() > b) fail(tag + "indicator exceeds support");
        break;
      case ConstraintFunction::Kind::tabulated:
        if (f.table().size() != support.size())
          fail(tag + "tabulated values must match the support node count");
        if (!f.derivative_table().empty() && f.derivative_table().size() != support.size())
          fail(tag + "tabulated derivative must match the support node count");
        break;
    }
    if (c.is_equality()) {
      if (!std::isfinite(c.value())) fail(tag + "target must be finite");
    } else {
      const auto iv = c.interval();
      if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi)) fail(tag + "interval bounds must be finite");
      if (iv.lo > iv.hi) fail(tag + "interval lower bound exceeds upper bound");
    }
  }
  return Problem{std::move(support), std::move(constraints)};
}

Problem validate_problem(const Problem& problem) {
  return validate_problem(problem.support, problem.constraints);
}

std::vector<ConstraintFunction> functions_of(std::span<const ConstraintSpec> constraints) {
  std::vector<ConstraintFunction> out;
  out.reserve(constraints.size());
  for (const auto& c : constraints) out.push_back(c.function);
  return out;
}

std::vector<double> exponential_density(const Support& support,
                                        std::span<const ConstraintFunction> functions,
                                        std::span<const double> multipliers,
                                        double log_partition) {
  if (functions.size() != multipliers.size()) fail("multiplier count does not match constraints");
  std::vector<double> exponent(support.size(), 0.0);
  for (std::size_t j = 0; j < functions.size(); ++j) {
    const auto h = functions[j].tabulate(support);
    for (std::size_t i = 0; i < exponent.size(); ++i) exponent[i] -= multipliers[j] * h[i];
  }
  for (double& e : exponent) e = std::exp(e - log_partition);
  return exponent;
}

MaxEntSolution::MaxEntSolution(Support support, std::vector<ConstraintSpec> constraints,
                               std::vector<double> multipliers, double log_partition,
                               std::vector<double> density, double entropy,
                               SolverDiagnostics diagnostics)
    : support_(std::move(support)),
      constraints_(std::move(constraints)),
      multipliers_(std::move(multipliers)),
      log_partition_(log_partition),
      density_(std::move(density)),
      entropy_(entropy),
      diagnostics_(std::move(diagnostics)) {
  if (density_.size() != support_.size()) fail("solution density does not match support");
  if (multipliers_.size() != constraints_.size()) fail("solution multipliers do not match constraints");
  if (!std::isfinite(log_partition_) || !std::isfinite(entropy_)) fail("solution is not finite");
  for (double v : density_)
    if (!(v > 0.0) || !std::isfinite(v)) fail("solution density must be strictly positive");

  const double mass = support_.integrate(density_);
  const double tol = support_.is_discrete() ? 1e-12 : 1e-10;
  if (std::abs(mass - 1.0) > tol) fail("solution density is not normalised (mass " + fmt(mass) + ")");

  const auto functions = functions_of(constraints_);
  const auto rebuilt = exponential_density(support_, functions, multipliers_, log_partition_);
  for (std::size_t i = 0; i < rebuilt.size(); ++i)
    if (std::abs(rebuilt[i] - density_[i]) > 1e-12 * density_[i])
      fail("solution density is not reproduced by its multipliers");
}

}  // namespace maxent
