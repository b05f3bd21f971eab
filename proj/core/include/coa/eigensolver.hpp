#pragma once

#include <cstddef>
#include <vector>

#include "coa/discretize.hpp"
#include "coa/matrix.hpp"

namespace coa {

struct SolverConfig {
  /// Convergence tolerance on eigenvalue increments and iterate residuals.
  double tol = 1e-10;
  long max_iterations = 100000;
  /// Bisection bracket for the K_alpha route; zeros select the automatic
  /// bracket [tol, max_k w_k + max u * |I|].
  double bisection_lo = 0.0;
  double bisection_hi = 0.0;
  /// Bisection stops on |rho - 1| <= tol_rho or bracket width <=
  /// min_bracket_width, whichever happens first.
  double tol_rho = 1e-10;
  double min_bracket_width = 1e-12;
  /// Cross-validate the power iteration against a dense eigensolve.
  bool cross_check_dense = false;
};

struct PowerResult {
  double rho = 0.0;
  std::vector<double> vec;  // nonnegative, unit l1 norm
  long iterations = 0;
  double last_increment = 0.0;
};

enum class SolveMethod { Direct, Bisection };

/// Perron eigenpair of the discretized problem.
struct EigenResult {
  double lambda_shifted = 0.0;
  double lambda_raw = 0.0;  // lambda_shifted - shift
  StepDensity density;      // p_n, induced norm 1
  std::vector<double> q_values;  // (w_diag + lambda) p
  double residual_a = 0.0;
  double residual_k = 0.0;
  long iterations = 0;
  SolveMethod method = SolveMethod::Direct;
};

/// Dominant eigenvalue of an entrywise-nonnegative matrix by power iteration
/// from the all-ones start vector. Converged when successive eigenvalue
/// estimates differ by at most tol and the iterate residual is below
/// tol * max(1, rho). Throws ConvergenceError (carrying the last increment)
/// after max_iterations; expected for reducible matrices with tied moduli.
PowerResult spectral_radius(const Matrix& m, const SolverConfig& cfg);
PowerResult spectral_radius(const Matrix& m, const SolverConfig& cfg,
                            std::vector<double> start);

/// True iff the directed graph with an edge k -> l whenever u(t_k, t_l) > 0
/// is strongly connected.
bool is_irreducible(const Matrix& u);

/// Direct route: power iteration on B = c Id - A_n with c = max_k w_k, which
/// is entrywise nonnegative; lambda_n = rho(B) - c.
EigenResult perron_eigenpair(const DiscreteOperator& op,
                             const SolverConfig& cfg);

/// Bisection route: finds alpha with rho(K_{alpha,n}) = 1, using that the
/// spectral radius is strictly decreasing in alpha. p = q / (w + alpha).
EigenResult solve_via_bisection(const DiscreteOperator& op,
                                const SolverConfig& cfg);

/// Induced norm of (diag(w) - U + lambda) p.
double residual(const DiscreteOperator& op, double lambda,
                const StepDensity& density);

/// Induced norm of (K_{lambda,n} - 1) q.
double residual_k_norm(const DiscreteOperator& op, double lambda,
                       const std::vector<double>& q);

}  // namespace coa
