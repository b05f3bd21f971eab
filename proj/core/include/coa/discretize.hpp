#pragma once

#include <cstddef>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "coa/matrix.hpp"
#include "coa/model.hpp"
#include "coa/quadrature.hpp"

namespace coa {

enum class Method { Nystrom, GalerkinSampled, GalerkinAveraged };

std::string_view method_name(Method m);
Method method_from_name(std::string_view name);

/// Finite-rank discretization of A = T - U on a partition: the sampled (or
/// cell-averaged) diagonal of T, the dense mutation matrix U with
/// U_{kl} = alpha_l u(t_k, t_l), and the sampled fitness values. A_n is only
/// ever formed on demand, never stored.
struct DiscreteOperator {
  Partition partition;
  std::vector<double> w_diag;
  Matrix u_matrix;
  std::vector<double> r_samples;
  Method method = Method::Nystrom;
  double shift = 0.0;

  std::size_t size() const { return partition.size(); }
};

/// Piecewise-constant density sum_k values[k] 1_{cell k}.
struct StepDensity {
  Partition partition;
  std::vector<double> values;

  /// sum_k alpha_k |values[k]|, the L1 norm of the embedded step function.
  double induced_norm() const;
};

/// Matrix size cap; COA_MAX_N overrides the default of 8192.
std::size_t max_matrix_cells();

DiscreteOperator nystrom_matrices(const ModelSpec& model,
                                  const LossFunction& loss,
                                  const Partition& partition);

/// sampled: identical formulas (and bits) to the Nystrom assembly with all
/// points at cell midpoints. averaged: T_kk is the cell average of w over
/// cell k and U_kl = (1/|I_k|) * iint_{I_k x I_l} u, both computed with an
/// s-point midpoint sub-quadrature per cell and axis.
DiscreteOperator galerkin_matrices(const ModelSpec& model,
                                   const LossFunction& loss,
                                   const Partition& partition, Method variant,
                                   int sub_quadrature = 4);

/// K_{alpha,n} = U_n (T_n + alpha)^{-1}: column l of U divided by
/// (w_l + alpha). Throws PoleError for alpha <= -min_k w_k.
Matrix k_alpha_matrix(const DiscreteOperator& op, double alpha);

/// Normalizes so the induced norm is one; the factor divided out is stored in
/// *normalization when given. Throws DegenerateDensityError on a zero vector.
StepDensity embed_density(const Partition& partition,
                          std::vector<double> values,
                          double* normalization = nullptr);

/// Total-variation distance (1/2)||p1 - p2||_1, evaluated exactly on the
/// overlay of the two partitions; a density is zero outside its coverage.
double tv_distance(const StepDensity& d1, const StepDensity& d2);

/// Plain-text dump: "N method shift", N rows of U, then w_diag and
/// r_samples, 17 significant digits. Used for golden-file comparisons.
void write_operator(std::ostream& os, const DiscreteOperator& op);

}  // namespace coa
