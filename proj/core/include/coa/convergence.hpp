#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "coa/discretize.hpp"
#include "coa/eigensolver.hpp"
#include "coa/errors.hpp"
#include "coa/model.hpp"

namespace coa {

struct StudyOptions {
  std::size_t base_cells = 128;  // N at level 0; N doubles per level
  int essinf_factor = 4;         // fine-grid cells = factor * finest N
  int sub_quadrature = 4;
  double tail_threshold = 1e-6;
  double u1_cap = 1e6;
};

struct LevelRecord {
  int level = 0;
  std::size_t n = 0;
  double lambda_shifted = 0.0;
  double lambda_raw = 0.0;
  double residual_a = 0.0;
  double residual_k = 0.0;
  double mean_fitness_gap = 0.0;
  double tv_prev = 0.0;  // 0 on the first level
  double tail_mass = 0.0;
};

struct ConvergenceReport {
  std::vector<LevelRecord> levels;
  std::vector<double> tv_consecutive;  // TV(p_l, p_{l+1})
  std::vector<double> cauchy_ratio;    // |lambda_{l+2}-lambda_{l+1}| / |lambda_{l+1}-lambda_l|
  std::string method;
  bool tail_flagged = false;  // final tail mass above the threshold
};

/// A level of the study failed; the levels solved so far are attached.
class StudyError : public Error {
 public:
  StudyError(const std::string& what, ConvergenceReport partial)
      : Error(what), partial(std::move(partial)) {}
  ConvergenceReport partial;
};

/// One solve of a model at a level: assembly, eigenpair, and the per-level
/// diagnostics used by the studies.
struct SolveOutcome {
  EigenResult result;
  DiscreteOperator op;
  int level = 0;
  double mean_fitness_gap = 0.0;
  double tail_mass = 0.0;
};

SolveOutcome solve_model(const ModelSpec& model, Method method, int level,
                         const SolverConfig& cfg, const StudyOptions& opts = {});

/// Solves on nested levels base_level .. base_level + num_levels - 1 and
/// records the eigenvalue sequence, consecutive total-variation distances,
/// Cauchy ratios, mean-fitness gaps and tail masses. The loss function is
/// built once at the finest truncation so all levels share one shift.
ConvergenceReport refinement_study(const ModelSpec& model, Method method,
                                   int base_level, int num_levels,
                                   const SolverConfig& cfg,
                                   const StudyOptions& opts = {});

struct MethodComparison {
  double lambda_sampled = 0.0;
  double lambda_averaged = 0.0;
  double lambda_gap = 0.0;
  double tv_gap = 0.0;
};

/// Sampled (= Nystrom) versus cell-averaged assembly on the same partition.
MethodComparison cross_method_compare(const ModelSpec& model, int level,
                                      const SolverConfig& cfg,
                                      const StudyOptions& opts = {});

struct OracleComparison {
  double lambda_error = 0.0;
  double tv_error = 0.0;
};

/// |lambda_raw - lambda_star| and the TV distance between the solved density
/// and the cellwise-averaged oracle density.
OracleComparison oracle_compare(const ModelSpec& model, double lambda_star,
                                const std::function<double(double)>& density_star,
                                int level, const SolverConfig& cfg,
                                const StudyOptions& opts = {});

/// CSV with header level,N,lambda_shifted,lambda_raw,residual_A,residual_K,
/// mean_fitness_gap,tv_prev,tail_mass; 17 significant digits.
std::string to_csv(const ConvergenceReport& report);
ConvergenceReport report_from_csv(const std::string& text);

}  // namespace coa
