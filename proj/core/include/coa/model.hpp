#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "coa/domain.hpp"
#include "coa/quadrature.hpp"

namespace coa {

/// Malthusian fitness r(x).
struct FitnessProfile {
  std::function<double(double)> eval;
  std::string form = "custom";

  double operator()(double x) const { return eval(x); }

  static FitnessProfile constant(double r0);
  static FitnessProfile linear(double r0, double slope);
  /// r(x) = r0 - s x^2
  static FitnessProfile quadratic(double r0, double s);
  /// r(x) = r0 exp(-s x^2)
  static FitnessProfile gaussian_peak(double r0, double s);
  /// Piecewise-linear interpolation of sorted (x, r) pairs; constant
  /// extrapolation beyond the table range.
  static FitnessProfile table(std::vector<std::pair<double, double>> points);
  static FitnessProfile custom(std::function<double(double)> f);
};

/// Mutation kernel u(x, y): rate density of mutants of type x produced by
/// parents of type y.
struct MutationKernel {
  std::function<double(double, double)> eval;
  std::string form = "custom";

  double operator()(double x, double y) const { return eval(x, y); }

  /// u(x,y) = mu * phi_sigma(x - y), phi the centered normal density.
  static MutationKernel gaussian_difference(double mu, double sigma);
  /// u(x,y) = mu * m(x): mutant distribution independent of the parent.
  static MutationKernel house_of_cards(double mu, std::function<double(double)> m);
  static MutationKernel house_of_cards_uniform(double mu, double m_value);
  /// u(x,y) = exp(gamma (x-y)) * h(|x-y|).
  static MutationKernel exponential_tilted(double gamma,
                                           std::function<double(double)> h);
  /// Reflected Gamma shape with the pole at x = y removed:
  /// u(x,y) = mu * d^theta / (2 Gamma(theta)) * (|x-y|+eps)^(theta-1)
  ///        * exp(-d (|x-y|+eps)).
  static MutationKernel regularized_gamma(double mu, double theta, double d,
                                          double eps = 1e-3);
  /// u(x,y) = mu on [x_lo,x_hi] x [y_lo,y_hi], 0 elsewhere. Deliberately
  /// reducible when the box does not cover the domain.
  static MutationKernel box(double mu, double x_lo, double x_hi, double y_lo,
                            double y_hi);
  static MutationKernel custom(std::function<double(double, double)> f);
};

/// The continuous problem: domain, fitness and mutation kernel.
struct ModelSpec {
  Domain domain;
  FitnessProfile fitness;
  MutationKernel kernel;
};

/// Q(u(., x)): total mutation rate of parent type x. The integration runs
/// over the first kernel argument (the mutant type).
double total_mutation_rate(const MutationKernel& kernel, double x,
                           const QuadratureRule& quad);

/// Loss function w = u1 - r - c with the shift c chosen so that the grid
/// minimum of w is zero (the discrete stand-in for essinf w = 0). u1 is
/// evaluated with the stored fine quadrature rule.
class LossFunction {
 public:
  LossFunction() = default;
  LossFunction(std::function<double(double, double)> kernel,
               std::function<double(double)> fitness, QuadratureRule grid,
               double shift)
      : kernel_(std::move(kernel)),
        fitness_(std::move(fitness)),
        grid_(std::move(grid)),
        shift_(shift) {}

  double u1(double x) const;
  double w(double x) const { return u1(x) - fitness_(x) - shift_; }
  double shift() const { return shift_; }
  const QuadratureRule& grid() const { return grid_; }

 private:
  std::function<double(double, double)> kernel_;
  std::function<double(double)> fitness_;
  QuadratureRule grid_;
  double shift_ = 0.0;
};

struct LossOptions {
  /// Coverage of the u1 integral and the essinf scan for real-line domains.
  int truncation_level = 0;
  /// (U2) guard: u1 beyond this cap raises InvalidModelError.
  double u1_cap = 1e6;
  /// When false, keep shift_override instead of renormalizing; used to study
  /// shift equivariance with the un-renormalized operator.
  bool renormalize = true;
  double shift_override = 0.0;
};

LossFunction loss_function(const ModelSpec& model, std::size_t grid_resolution,
                           const LossOptions& opts = {});

/// Grid estimate of the Hille-Tamarkin norm of K_alpha:
/// sum_k alpha_k max_l u(t_k, t_l) / (w(t_l) + alpha).
double hille_tamarkin_norm(const MutationKernel& kernel,
                           const std::function<double(double)>& w, double alpha,
                           const Partition& grid);

}  // namespace coa
