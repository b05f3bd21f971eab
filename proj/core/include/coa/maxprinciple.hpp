#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "coa/convergence.hpp"
#include "coa/eigensolver.hpp"
#include "coa/model.hpp"

namespace coa {

/// Scalar maximum-principle estimate lambda_MP = max_k (r(t_k) - g(t_k)) on a
/// 4x-refined grid, with the mutational loss g.
struct MaxPrincipleEstimate {
  std::vector<double> g_values;  // on grid.points
  double lambda_mp = 0.0;
  double argmax = 0.0;
  Partition grid;
};

/// g(x) = Q(y -> u(x,y) - sqrt(u(x,y) u(y,x))). Throws InvalidModelError on a
/// negative kernel sample.
double mutational_loss_g(const ModelSpec& model, double x,
                         const QuadratureRule& quad);

/// Uses the raw (unshifted) fitness, matching the convention of lambda_raw.
MaxPrincipleEstimate max_principle_estimate(const ModelSpec& model,
                                            const Partition& partition);

/// u(x,y) = exp(gamma (x-y)) * nu * h(nu |x-y|). At nu = 1 this is the plain
/// tilted kernel; the total mass of the difference part is nu-independent.
MutationKernel scaling_family(std::function<double(double)> h, double gamma,
                              double nu);

/// Model family for the mutation-locality experiment. width_scale is the
/// width of h (for a gaussian profile, its standard deviation); the mesh is
/// refined until mesh_width <= width_scale / (4 nu) so the scaled kernel
/// stays resolved.
struct LocalityFamily {
  Domain domain;
  FitnessProfile fitness;
  std::function<double(double)> h;
  double gamma = 0.0;
  double width_scale = 1.0;
};

struct LocalityRow {
  double nu = 0.0;
  int level = 0;
  std::size_t n = 0;
  double lambda_raw = 0.0;
  double lambda_mp = 0.0;
  double gap = 0.0;
};

struct LocalityTable {
  std::vector<LocalityRow> rows;
  bool monotone_nonincreasing = true;  // of gap along the nu ladder
};

/// Solves the discretized problem for each nu and tabulates
/// gap = lambda_MP - lambda_raw. The claim under test is that the gap shrinks
/// as nu grows; violations only clear the monotone flag. Real-line domains
/// are truncated at the requested level's half-width and kept fixed while the
/// mesh refines.
LocalityTable locality_experiment(const LocalityFamily& family,
                                  const std::vector<double>& nu_list, int level,
                                  const SolverConfig& cfg,
                                  const StudyOptions& opts = {});

/// CSV with header nu,level,N,lambda_raw,lambda_mp,gap; 17 significant digits.
std::string to_csv(const LocalityTable& table);

}  // namespace coa
