#include "coa/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "coa/errors.hpp"
#include "coa/summation.hpp"

namespace coa {

namespace {

double l1_norm(const std::vector<double>& v) {
  std::vector<double> t(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) t[i] = std::abs(v[i]);
  return pairwise_sum(t);
}

void check_nonnegative(const Matrix& m) {
  if (m.rows() != m.cols())
    throw InvalidArgumentError("spectral_radius needs a square matrix");
  if (m.min_entry() < 0.0)
    throw InvalidArgumentError("spectral_radius needs a nonnegative matrix");
}

double dense_spectral_radius(const Matrix& m) {
  const std::size_t n = m.rows();
  Eigen::MatrixXd em(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) em(i, j) = m(i, j);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(em, /*computeEigenvectors=*/false);
  double rho = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
    rho = std::max(rho, std::abs(solver.eigenvalues()[i]));
  return rho;
}

}  // namespace

PowerResult spectral_radius(const Matrix& m, const SolverConfig& cfg) {
  return spectral_radius(m, cfg, {});
}

PowerResult spectral_radius(const Matrix& m, const SolverConfig& cfg,
                            std::vector<double> start) {
  check_nonnegative(m);
  const std::size_t n = m.rows();

  std::vector<double> v = start.empty() ? std::vector<double>(n, 1.0)
                                        : std::move(start);
  if (v.size() != n)
    throw InvalidArgumentError("start vector length must match the matrix");
  {
    const double s = l1_norm(v);
    if (!(s > 0.0)) throw InvalidArgumentError("start vector must be nonzero");
    for (double& x : v) x /= s;
  }

  std::vector<double> y(n), diff(n);
  double rho_prev = std::numeric_limits<double>::quiet_NaN();
  double increment = std::numeric_limits<double>::quiet_NaN();
  for (long it = 1; it <= cfg.max_iterations; ++it) {
    matvec(m, v, y);
    const double rho = pairwise_sum(y);  // = ||Mv||_1 / ||v||_1 for v, y >= 0
    if (rho == 0.0) return {0.0, v, it, 0.0};
    for (std::size_t i = 0; i < n; ++i) diff[i] = std::abs(y[i] - rho * v[i]);
    const double resid = pairwise_sum(diff);
    increment = std::abs(rho - rho_prev);
    const bool rho_settled = !std::isnan(rho_prev) && increment <= cfg.tol;
    for (std::size_t i = 0; i < n; ++i) v[i] = y[i] / rho;
    if (rho_settled && resid <= cfg.tol * std::max(1.0, rho))
      return {rho, v, it, increment};
    rho_prev = rho;
  }
  throw ConvergenceError(
      "power iteration did not converge after " +
          std::to_string(cfg.max_iterations) +
          " iterations (last increment " + std::to_string(increment) + ")",
      increment, cfg.max_iterations);
}

bool is_irreducible(const Matrix& u) {
  const std::size_t n = u.rows();
  if (n == 0) return false;
  if (n == 1) return u(0, 0) >= 0.0;  // single cell: nothing to disconnect

  // Strong connectivity via forward and backward reachability from node 0.
  const auto reach = [&](bool forward) {
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
      const std::size_t k = stack.back();
      stack.pop_back();
      for (std::size_t l = 0; l < n; ++l) {
        if (seen[l]) continue;
        const double edge = forward ? u(k, l) : u(l, k);
        if (edge > 0.0) {
          seen[l] = 1;
          ++count;
          stack.push_back(l);
        }
      }
    }
    return count == n;
  };
  return reach(true) && reach(false);
}

namespace {

EigenResult finish_result(const DiscreteOperator& op, double lambda_shifted,
                          std::vector<double> p_vec, long iterations,
                          SolveMethod method) {
  EigenResult res;
  res.lambda_shifted = lambda_shifted;
  res.lambda_raw = lambda_shifted - op.shift;
  res.density = embed_density(op.partition, std::move(p_vec));
  res.q_values.resize(op.size());
  for (std::size_t k = 0; k < op.size(); ++k)
    res.q_values[k] = (op.w_diag[k] + lambda_shifted) * res.density.values[k];
  res.residual_a = residual(op, lambda_shifted, res.density);
  res.residual_k = residual_k_norm(op, lambda_shifted, res.q_values);
  res.iterations = iterations;
  res.method = method;
  return res;
}

}  // namespace

EigenResult perron_eigenpair(const DiscreteOperator& op,
                             const SolverConfig& cfg) {
  if (!is_irreducible(op.u_matrix))
    throw StructuralError(
        "mutation matrix support graph is not strongly connected");

  const std::size_t n = op.size();
  const double c = *std::max_element(op.w_diag.begin(), op.w_diag.end());

  // B = c Id - A_n is entrywise nonnegative; its Perron root is c + lambda_n.
  Matrix b = op.u_matrix;
  for (std::size_t k = 0; k < n; ++k) b(k, k) += c - op.w_diag[k];

  const PowerResult pr = spectral_radius(b, cfg);
  const double lambda = pr.rho - c;

  if (cfg.cross_check_dense) {
    const double rho_dense = dense_spectral_radius(b);
    if (std::abs(rho_dense - pr.rho) > std::max(1e4 * cfg.tol, 1e-8 * pr.rho))
      throw ConvergenceError("power iteration disagrees with the dense eigensolve",
                             std::abs(rho_dense - pr.rho), pr.iterations);
  }

  return finish_result(op, lambda, pr.vec, pr.iterations, SolveMethod::Direct);
}

EigenResult solve_via_bisection(const DiscreteOperator& op,
                                const SolverConfig& cfg) {
  if (!is_irreducible(op.u_matrix))
    throw StructuralError(
        "mutation matrix support graph is not strongly connected");

  const std::size_t n = op.size();
  const double min_w = *std::min_element(op.w_diag.begin(), op.w_diag.end());
  const double max_w = *std::max_element(op.w_diag.begin(), op.w_diag.end());

  double lo = cfg.bisection_lo;
  double hi = cfg.bisection_hi;
  if (!(hi > lo)) {
    // Default bracket: lo just above the pole, hi at the coarse bound
    // max_k w(t_k) + max u * |I| which dominates every discrete eigenvalue.
    lo = std::max(cfg.tol, -min_w + cfg.tol);
    double u_max = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t l = 0; l < n; ++l)
        u_max = std::max(u_max, op.u_matrix(k, l) / op.partition.weight(l));
    hi = max_w + u_max * op.partition.covered_length();
  }
  if (!(lo > -min_w))
    throw PoleError("bisection bracket must start above -min_k w(t_k)");

  long total_iterations = 0;
  const auto rho_at = [&](double alpha) {
    const PowerResult pr = spectral_radius(k_alpha_matrix(op, alpha), cfg);
    total_iterations += pr.iterations;
    return pr;
  };

  if (rho_at(lo).rho < 1.0 - cfg.tol_rho)
    throw BracketError(
        "lambda below bracket: rho(K_lo) < 1; the model likely violates the "
        "cusp condition at this resolution");
  if (rho_at(hi).rho > 1.0 + cfg.tol_rho)
    throw BracketError("lambda above bracket: rho(K_hi) > 1");

  double alpha = 0.5 * (lo + hi);
  PowerResult pr;
  while (true) {
    alpha = 0.5 * (lo + hi);
    pr = rho_at(alpha);
    if (std::abs(pr.rho - 1.0) <= cfg.tol_rho) break;
    if (pr.rho > 1.0)
      lo = alpha;
    else
      hi = alpha;
    if (hi - lo <= cfg.min_bracket_width) {
      alpha = 0.5 * (lo + hi);
      pr = rho_at(alpha);
      break;
    }
  }

  // q is the Perron vector of K_alpha; p = q / (w + alpha), then both are
  // renormalized through the density embedding.
  std::vector<double> p(n);
  for (std::size_t k = 0; k < n; ++k)
    p[k] = pr.vec[k] / (op.w_diag[k] + alpha);

  EigenResult res = finish_result(op, alpha, std::move(p), total_iterations,
                                  SolveMethod::Bisection);
  return res;
}

double residual(const DiscreteOperator& op, double lambda,
                const StepDensity& density) {
  if (density.values.size() != op.size())
    throw InvalidArgumentError("density length must match the operator");
  const std::size_t n = op.size();
  std::vector<double> up(n);
  matvec(op.u_matrix, density.values, up);
  std::vector<double> terms(n);
  for (std::size_t k = 0; k < n; ++k)
    terms[k] = op.partition.weight(k) *
               std::abs((op.w_diag[k] + lambda) * density.values[k] - up[k]);
  return pairwise_sum(terms);
}

double residual_k_norm(const DiscreteOperator& op, double lambda,
                       const std::vector<double>& q) {
  if (q.size() != op.size())
    throw InvalidArgumentError("q length must match the operator");
  const std::size_t n = op.size();
  std::vector<double> scaled(n);
  for (std::size_t l = 0; l < n; ++l) {
    const double denom = op.w_diag[l] + lambda;
    if (!(denom > 0.0))
      throw PoleError("lambda must exceed -min_k w(t_k) for K_lambda");
    scaled[l] = q[l] / denom;
  }
  std::vector<double> kq(n);
  matvec(op.u_matrix, scaled, kq);
  std::vector<double> terms(n);
  for (std::size_t k = 0; k < n; ++k)
    terms[k] = op.partition.weight(k) * std::abs(kq[k] - q[k]);
  return pairwise_sum(terms);
}

}  // namespace coa
