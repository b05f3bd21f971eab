#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "coa/convergence.hpp"
#include "coa/discretize.hpp"
#include "coa/eigensolver.hpp"
#include "coa/model.hpp"
#include "coa/validate.hpp"

namespace coa {

/// Parsed run configuration. Mirrors the JSON config document; unknown keys
/// are rejected at parse time.
struct RunConfig {
  std::string domain_kind = "compact";  // "compact" | "real-line"
  double domain_a = 0.0;
  double domain_b = 1.0;
  double domain_l0 = 4.0;

  std::string fitness_form = "constant";
  std::map<std::string, double> fitness_params;
  std::vector<std::pair<double, double>> fitness_table;

  std::string kernel_form;
  std::map<std::string, double> kernel_params;

  Method method = Method::Nystrom;
  int level_base = 0;
  int level_count = 1;
  std::size_t base_cells = 128;

  double solver_tol = 1e-10;
  long solver_max_iterations = 100000;

  std::string output_path;
  std::string output_format = "csv";  // "csv" | "json"

  int sub_quadrature = 4;
  int essinf_factor = 4;

  double validation_essinf_tol = 1e-6;
  double validation_u1_cap = 1e6;

  std::vector<double> maxp_nu;
  double maxp_sigma_h = 0.0;  // 0: derive from the kernel width

  bool operator==(const RunConfig&) const = default;

  ModelSpec build_model() const;
  SolverConfig solver_config() const;
  StudyOptions study_options() const;
};

/// Parses the JSON config document. Syntax errors carry line/column; semantic
/// errors name the offending key.
RunConfig parse_config(const std::string& text);

/// Canonical JSON serialization; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

enum class Command { Solve, Converge, Validate, Maxp };

Command command_from_name(std::string_view name);

struct RunResult {
  int exit_code = 0;       // 0 ok, 2 model validation failure, 3 solver failure
  std::string artifact;    // serialized primary output
  std::string message;     // human-readable diagnostics
};

/// Executes one command. The artifact is written to out_override, or to the
/// config's output path when out_override is empty; an empty path keeps the
/// artifact in memory only (the CLI prints it to stdout).
RunResult run_command(const RunConfig& config, Command command,
                      const std::string& out_override = "");

}  // namespace coa
