#pragma once

// Problem-spec files: one `key = value` construct per line, `#` comments.
//
//   domain = 0 5                       continuous [a, b]
//   nodes = 1024
//   breakpoints = 0.5                  optional panel edges
//   points = 0 1 2 3                   discrete support instead of domain
//   constraint = power 1 target 1
//   constraint = power 2 interval 0.2 0.4
//   constraint = indicator 0 0.5 target 0.8
//   constraint = tabulated v1 ... vN [derivative d1 ... dN] target 0.3
//   assessment = 0.5 0.8               U(0.5) = 0.8
//   tol = 1e-8
//   max_iter = 200
//   base = natural | base2
//   output = result.csv                relative to the spec file
//
// Entropy inputs: `masses = ...`, or a domain with `density = uniform`,
// `density = v1 ... vN`, or `density_table = result.csv`.

#include <filesystem>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "maxent/core.hpp"
#include "maxent/entropy.hpp"
#include "maxent/utility.hpp"

namespace maxent::cli {

/// Malformed or invalid spec content, located by file and line.
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The spec file could not be opened or read.
class FileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SpecOptions {
  std::optional<double> tol;
  std::optional<int> max_iter;
  std::optional<LogBase> base;
  std::optional<std::filesystem::path> output_path;
};

struct ProblemSpecFile {
  std::string source = "<spec>";
  std::filesystem::path directory;

  std::optional<double> a;
  std::optional<double> b;
  std::optional<int> nodes;
  std::vector<double> points;
  std::vector<double> breakpoints;
  int domain_line = 0;

  std::vector<ConstraintSpec> constraints;
  std::vector<int> constraint_lines;
  std::vector<Assessment> assessments;
  int assessment_line = 0;

  std::vector<double> masses;
  bool uniform_density = false;
  std::vector<double> density;
  std::optional<std::filesystem::path> density_table;

  SpecOptions options;

  bool is_discrete() const { return !points.empty(); }
};

ProblemSpecFile parse_spec(std::istream& in, const std::string& source = "<spec>");
ProblemSpecFile read_spec(const std::filesystem::path& path);

/// Support described by the file; `nodes_override` replaces the file's node count.
Support build_support(const ProblemSpecFile& spec, std::optional<int> nodes_override = {});

/// Validated problem for constraint-driven runs; each constraint is checked
/// against the support and errors carry its line.
Problem build_problem(const ProblemSpecFile& spec, const Support& support);

/// Column `u` of a result table whose `x` column matches the support nodes.
std::vector<double> read_density_table(const std::filesystem::path& path, const Support& support);

}  // namespace maxent::cli
