#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "cli/spec_file.hpp"
#include "maxent/risk.hpp"
#include "maxent/solver.hpp"

namespace maxent::cli {

namespace {

std::string_view to_string(ActiveBound b) {
  switch (b) {
    case ActiveBound::none: return "none";
    case ActiveBound::lower: return "lower";
    case ActiveBound::upper: return "upper";
    case ActiveBound::equality: return "equality";
  }
  return "none";
}

std::string_view to_string(LogBase b) { return b == LogBase::base2 ? "base2" : "natural"; }

template <typename Range, typename Fn>
void write_list(std::ostream& out, std::string_view key, const Range& items, Fn fn) {
  out << key << " =";
  for (const auto& item : items) out << ' ' << fn(item);
  out << '\n';
}

std::filesystem::path resolve(const ProblemSpecFile& spec, const std::filesystem::path& p) {
  return p.is_absolute() || spec.directory.empty() ? p : spec.directory / p;
}

}  // namespace

std::string format_number(double v) {
  if (v == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ResultBundle make_bundle(const MaxEntSolution& solution, LogBase base) {
  const auto& support = solution.support();
  const auto& diag = solution.diagnostics();
  ResultBundle r(support);
  r.family = classify_family(solution.constraints());
  for (const auto& c : solution.constraints()) r.constraint_labels.push_back(c.function.describe());
  r.multipliers.assign(solution.multipliers().begin(), solution.multipliers().end());
  r.log_partition = solution.log_partition();
  r.entropy = base == LogBase::base2 ? solution.entropy() / std::numbers::ln2 : solution.entropy();
  r.base = base;
  r.iterations = diag.iterations;
  r.outer_iterations = diag.outer_iterations;
  r.gradient_max_norm = diag.gradient_max_norm;
  r.residuals = diag.residuals;
  r.active = diag.active;

  const auto x = support.nodes();
  const auto p = solution.density();
  r.table.resize(x.size());
  if (support.is_discrete()) {
    r.gamma_source = "none";
    double running = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      running += p[i];
      r.table[i] = ResultRow{x[i], p[i], i + 1 == x.size() ? 1.0 : std::min(running, 1.0), {}};
    }
    return r;
  }

  const auto curve = density_to_curve(p, support);
  const bool analytic = std::all_of(solution.constraints().begin(), solution.constraints().end(),
                                    [](const ConstraintSpec& c) { return c.function.has_derivative(); });
  const auto profile = analytic ? risk_aversion_analytic(solution) : risk_aversion_numeric(curve);
  r.gamma_source = analytic ? "analytic" : "numeric";
  for (std::size_t i = 0; i < x.size(); ++i)
    r.table[i] = ResultRow{x[i], curve.density()[i], curve.values()[i], profile.gamma[i]};
  return r;
}

void write_summary(std::ostream& out, const ResultBundle& b) {
  const auto& s = b.support;
  out << "status = converged\n";
  out << "family = " << maxent::to_string(b.family) << '\n';
  out << "support = " << (s.is_discrete() ? "discrete" : "continuous") << '\n';
  out << "domain = " << format_number(s.lower()) << ' ' << format_number(s.upper()) << '\n';
  out << "nodes = " << s.size() << '\n';
  if (!s.breakpoints().empty())
    write_list(out, "breakpoints", s.breakpoints(), format_number);
  write_list(out, "constraints", b.constraint_labels, [](const std::string& l) { return l; });
  write_list(out, "multipliers", b.multipliers, format_number);
  out << "log_partition = " << format_number(b.log_partition) << '\n';
  out << "entropy = " << format_number(b.entropy) << '\n';
  out << "base = " << to_string(b.base) << '\n';
  out << "iterations = " << b.iterations << '\n';
  out << "outer_iterations = " << b.outer_iterations << '\n';
  out << "gradient_max_norm = " << format_number(b.gradient_max_norm) << '\n';
  write_list(out, "residuals", b.residuals, format_number);
  write_list(out, "active", b.active, [](ActiveBound a) { return to_string(a); });
  out << "gamma = " << b.gamma_source << '\n';
}

void write_table(std::ostream& out, const ResultBundle& b) {
  out << "x,u,U,gamma\n";
  for (const auto& row : b.table) {
    out << format_number(row.x) << ',' << format_number(row.u) << ',' << format_number(row.U) << ',';
    if (row.gamma) out << format_number(*row.gamma);
    out << '\n';
  }
}

int cmd_solve(const std::filesystem::path& spec_path, const SolveFlags& flags, std::ostream& out,
              std::ostream& err) {
  try {
    const auto spec = read_spec(spec_path);
    const auto support = build_support(spec, flags.nodes);

    SolverOptions options;
    options.tol = flags.tol ? flags.tol : spec.options.tol;
    if (auto it = flags.max_iter ? flags.max_iter : spec.options.max_iter) options.max_iter = *it;
    const LogBase base = flags.base2 ? LogBase::base2 : spec.options.base.value_or(LogBase::natural);

    Problem problem{support, {}};
    if (!spec.assessments.empty()) {
      try {
        problem = assessment_problem(support, spec.assessments);
      } catch (const ValidationError& e) {
        throw SpecError(spec.source + ":" + std::to_string(spec.assessment_line) +
                        ": assessment: " + e.what());
      }
    } else {
      problem = build_problem(spec, support);
    }

    const auto solution = solve(problem, options);
    const auto bundle = make_bundle(solution, base);

    std::optional<std::filesystem::path> table_path = flags.out;
    if (!table_path && spec.options.output_path) table_path = resolve(spec, *spec.options.output_path);

    if (!flags.quiet) write_summary(out, bundle);
    if (table_path) {
      std::ofstream file(*table_path);
      if (!file) {
        err << "error: cannot write table to '" << table_path->string() << "'\n";
        return kInputError;
      }
      write_table(file, bundle);
    } else {
      if (!flags.quiet) out << '\n';
      write_table(out, bundle);
    }
    return kOk;
  } catch (const FileError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const SpecError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const ValidationError& e) {
    err << "error: invalid problem: " << e.what() << '\n';
    return kInputError;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  }
}

int cmd_entropy(const EntropyFlags& flags, std::ostream& out, std::ostream& err) {
  try {
    const LogBase base = flags.base2 ? LogBase::base2 : LogBase::natural;
    EntropyValue h;
    if (flags.spec && !flags.masses.empty()) {
      err << "error: give either masses or a spec file, not both\n";
      return kInputError;
    }
    if (!flags.spec) {
      if (flags.masses.empty()) {
        err << "error: nothing to evaluate; pass --masses or a spec file\n";
        return kInputError;
      }
      h = discrete_entropy(flags.masses, base);
    } else {
      const auto spec = read_spec(*flags.spec);
      const LogBase b = flags.base2 ? LogBase::base2 : spec.options.base.value_or(LogBase::natural);
      if (!spec.masses.empty()) {
        h = discrete_entropy(spec.masses, b);
      } else {
        const auto support = build_support(spec, flags.nodes);
        std::vector<double> density;
        if (spec.uniform_density) {
          density.assign(support.size(), support.is_discrete() ? 1.0 / support.size() : 1.0 / support.length());
        } else if (spec.density_table) {
          density = read_density_table(resolve(spec, *spec.density_table), support);
        } else if (!spec.density.empty()) {
          density = spec.density;
        } else {
          throw SpecError(spec.source + ": missing 'masses', 'density' or 'density_table'");
        }
        h = support.is_discrete() ? discrete_entropy(density, b) : differential_entropy(density, support, b);
      }
    }
    out << "entropy = " << format_number(h.value) << '\n';
    out << "base = " << to_string(h.base) << '\n';
    return kOk;
  } catch (const FileError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const SpecError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const ValidationError& e) {
    err << "error: invalid distribution: " << e.what() << '\n';
  }
  return kInputError;
}

}  // namespace maxent::cli
