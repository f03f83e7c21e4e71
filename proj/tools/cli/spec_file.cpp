#include "cli/spec_file.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace maxent::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> tokens(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == ',' || c == '\r') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

class LineParser {
 public:
  LineParser(std::string source, int line, std::string key)
      : source_(std::move(source)), line_(line), key_(std::move(key)) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw SpecError(source_ + ":" + std::to_string(line_) + ": " + key_ + ": " + what);
  }

  double number(const std::string& tok) const {
    double v = 0.0;
    const auto* end = tok.data() + tok.size();
    const auto [ptr, ec] = std::from_chars(tok.data(), end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v)) fail("'" + tok + "' is not a finite number");
    return v;
  }

  int integer(const std::string& tok) const {
    int v = 0;
    const auto* end = tok.data() + tok.size();
    const auto [ptr, ec] = std::from_chars(tok.data(), end, v);
    if (ec != std::errc{} || ptr != end) fail("'" + tok + "' is not an integer");
    return v;
  }

  std::vector<double> numbers(const std::vector<std::string>& toks, std::size_t from,
                              std::size_t to) const {
    std::vector<double> out;
    for (std::size_t i = from; i < to; ++i) out.push_back(number(toks[i]));
    return out;
  }

 private:
  std::string source_;
  int line_;
  std::string key_;
};

ConstraintSpec parse_constraint(const LineParser& lp, const std::vector<std::string>& t) {
  if (t.empty()) lp.fail("missing constraint kind");
  // Locate the target clause: `target b` or `interval lo hi`.
  std::size_t clause = t.size();
  for (std::size_t i = 1; i < t.size(); ++i)
    if (t[i] == "target" || t[i] == "interval") clause = i;
  if (clause == t.size()) lp.fail("missing 'target <b>' or 'interval <lo> <hi>'");

  std::variant<double, Interval> target;
  if (t[clause] == "target") {
    if (t.size() != clause + 2) lp.fail("'target' takes exactly one value");
    target = lp.number(t[clause + 1]);
  } else {
    if (t.size() != clause + 3) lp.fail("'interval' takes exactly two values");
    target = Interval{lp.number(t[clause + 1]), lp.number(t[clause + 2])};
  }

  const std::string& kind = t[0];
  try {
    if (kind == "power") {
      if (clause != 2) lp.fail("power takes one exponent");
      const int k = lp.integer(t[1]);
      return ConstraintSpec{ConstraintFunction::power(k), target};
    }
    if (kind == "indicator") {
      if (clause != 3) lp.fail("indicator takes two bounds");
      return ConstraintSpec{ConstraintFunction::indicator(lp.number(t[1]), lp.number(t[2])), target};
    }
    if (kind == "tabulated") {
      std::size_t split = clause;
      for (std::size_t i = 1; i < clause; ++i)
        if (t[i] == "derivative") split = i;
      auto values = lp.numbers(t, 1, split);
      std::vector<double> deriv;
      if (split < clause) deriv = lp.numbers(t, split + 1, clause);
      if (values.empty()) lp.fail("tabulated constraint has no values");
      return ConstraintSpec{ConstraintFunction::tabulated(std::move(values), std::move(deriv)), target};
    }
  } catch (const ValidationError& e) {
    lp.fail(e.what());
  }
  lp.fail("unknown constraint kind '" + kind + "' (expected power, indicator or tabulated)");
}

}  // namespace

ProblemSpecFile parse_spec(std::istream& in, const std::string& source) {
  ProblemSpecFile spec;
  spec.source = source;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw SpecError(source + ":" + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto t = tokens(value);
    const LineParser lp(spec.source, line_no, key);
    if (t.empty() && key != "breakpoints") lp.fail("missing value");

    if (key == "domain") {
      if (t.size() != 2) lp.fail("expected 'domain = <a> <b>'");
      spec.a = lp.number(t[0]);
      spec.b = lp.number(t[1]);
      spec.domain_line = line_no;
    } else if (key == "nodes") {
      if (t.size() != 1) lp.fail("expected one integer");
      spec.nodes = lp.integer(t[0]);
    } else if (key == "points") {
      spec.points = lp.numbers(t, 0, t.size());
      spec.domain_line = line_no;
    } else if (key == "breakpoints") {
      spec.breakpoints = lp.numbers(t, 0, t.size());
    } else if (key == "constraint") {
      if (!spec.assessments.empty()) lp.fail("constraints and assessments cannot both drive a run");
      spec.constraints.push_back(parse_constraint(lp, t));
      spec.constraint_lines.push_back(line_no);
    } else if (key == "assessment") {
      if (!spec.constraints.empty()) lp.fail("constraints and assessments cannot both drive a run");
      if (t.size() != 2) lp.fail("expected 'assessment = <x> <u>'");
      spec.assessments.push_back(Assessment{lp.number(t[0]), lp.number(t[1])});
      if (spec.assessment_line == 0) spec.assessment_line = line_no;
    } else if (key == "masses") {
      spec.masses = lp.numbers(t, 0, t.size());
    } else if (key == "density") {
      if (t.size() == 1 && t[0] == "uniform") {
        spec.uniform_density = true;
      } else {
        spec.density = lp.numbers(t, 0, t.size());
      }
    } else if (key == "density_table") {
      spec.density_table = std::filesystem::path(value);
    } else if (key == "tol") {
      if (t.size() != 1) lp.fail("expected one number");
      spec.options.tol = lp.number(t[0]);
      if (!(*spec.options.tol > 0.0)) lp.fail("tolerance must be positive");
    } else if (key == "max_iter") {
      if (t.size() != 1) lp.fail("expected one integer");
      spec.options.max_iter = lp.integer(t[0]);
      if (*spec.options.max_iter < 1) lp.fail("max_iter must be positive");
    } else if (key == "base") {
      if (value == "natural") spec.options.base = LogBase::natural;
      else if (value == "base2") spec.options.base = LogBase::base2;
      else lp.fail("expected 'natural' or 'base2'");
    } else if (key == "output") {
      spec.options.output_path = std::filesystem::path(value);
    } else {
      lp.fail("unknown key");
    }
  }
  if (spec.a && !spec.points.empty())
    throw SpecError(source + ":" + std::to_string(spec.domain_line) +
                    ": domain: 'domain' and 'points' are mutually exclusive");
  return spec;
}

ProblemSpecFile read_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot read spec file '" + path.string() + "'");
  auto spec = parse_spec(in, path.string());
  spec.directory = path.parent_path();
  return spec;
}

Support build_support(const ProblemSpecFile& spec, std::optional<int> nodes_override) {
  const std::string where = spec.source + ":" + std::to_string(spec.domain_line) + ": ";
  try {
    if (spec.is_discrete()) return Support::discrete(spec.points);
    if (!spec.a || !spec.b) throw SpecError(spec.source + ": missing 'domain' or 'points'");
    const int n = nodes_override.value_or(spec.nodes.value_or(kDefaultNodes));
    return Support::continuous(*spec.a, *spec.b, n, spec.breakpoints);
  } catch (const ValidationError& e) {
    throw SpecError(where + "domain: " + e.what());
  }
}

Problem build_problem(const ProblemSpecFile& spec, const Support& support) {
  for (std::size_t j = 0; j < spec.constraints.size(); ++j) {
    try {
      validate_problem(support, {spec.constraints[j]});
    } catch (const ValidationError& e) {
      std::string what = e.what();
      if (const auto colon = what.find(": "); what.rfind("constraint ", 0) == 0 && colon != std::string::npos)
        what = what.substr(colon + 2);
      throw SpecError(spec.source + ":" + std::to_string(spec.constraint_lines[j]) +
                      ": constraint: " + what);
    }
  }
  return validate_problem(support, spec.constraints);
}

std::vector<double> read_density_table(const std::filesystem::path& path, const Support& support) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot read density table '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || trim(line) != "x,u,U,gamma")
    throw SpecError(path.string() + ":1: expected header 'x,u,U,gamma'");
  const auto x = support.nodes();
  std::vector<double> u;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    const LineParser lp(path.string(), line_no, "row");
    if (cells.size() < 2) lp.fail("expected at least x,u");
    const double xi = lp.number(cells[0]);
    if (u.size() >= x.size()) lp.fail("more rows than support nodes");
    const double scale = std::max({1.0, std::abs(support.lower()), std::abs(support.upper())});
    if (std::abs(xi - x[u.size()]) > 1e-12 * scale) lp.fail("x does not match the support grid");
    u.push_back(lp.number(cells[1]));
  }
  if (u.size() != x.size())
    throw SpecError(path.string() + ": table has " + std::to_string(u.size()) + " rows for " +
                    std::to_string(x.size()) + " support nodes");
  return u;
}

}  // namespace maxent::cli
