#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "maxent/core.hpp"
#include "maxent/entropy.hpp"
#include "maxent/utility.hpp"

namespace maxent::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kInfeasible = 2 };

struct ResultRow {
  double x = 0.0;
  double u = 0.0;
  double U = 0.0;
  std::optional<double> gamma;
};

struct ResultBundle {
  explicit ResultBundle(Support s) : support(std::move(s)) {}

  Support support;
  UtilityFamily family = UtilityFamily::general;
  std::vector<std::string> constraint_labels;
  std::vector<double> multipliers;
  double log_partition = 0.0;
  double entropy = 0.0;
  LogBase base = LogBase::natural;
  int iterations = 0;
  int outer_iterations = 0;
  double gradient_max_norm = 0.0;
  std::vector<double> residuals;
  std::vector<ActiveBound> active;
  std::string gamma_source;  ///< "analytic", "numeric" or "none"
  std::vector<ResultRow> table;
};

/// Summary, per-node table and risk-aversion column for a solved problem.
ResultBundle make_bundle(const MaxEntSolution& solution, LogBase base);

/// `key = value` lines, numbers with 17 significant digits.
void write_summary(std::ostream& out, const ResultBundle& bundle);

/// CSV with header `x,u,U,gamma`; gamma is empty where undefined.
void write_table(std::ostream& out, const ResultBundle& bundle);

/// Shortest text that round-trips a double (printf %.17g).
std::string format_number(double v);

struct SolveFlags {
  std::optional<double> tol;
  std::optional<int> max_iter;
  std::optional<int> nodes;
  bool base2 = false;
  std::optional<std::filesystem::path> out;
  bool quiet = false;
};

/// Solves the problem in `spec_path`. The summary goes to `out` (unless
/// quiet); the table goes to --out / `output`, or to `out` after a blank line.
int cmd_solve(const std::filesystem::path& spec_path, const SolveFlags& flags, std::ostream& out,
              std::ostream& err);

struct EntropyFlags {
  std::optional<std::filesystem::path> spec;
  std::vector<double> masses;
  std::optional<int> nodes;
  bool base2 = false;
};

/// Entropy of inline masses or of the distribution described by a spec file.
int cmd_entropy(const EntropyFlags& flags, std::ostream& out, std::ostream& err);

}  // namespace maxent::cli
