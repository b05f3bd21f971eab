#include "coa/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "coa/errors.hpp"
#include "coa/summation.hpp"

namespace coa {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310002;

double normal_density(double z, double sigma) {
  const double s = z / sigma;
  return std::exp(-0.5 * s * s) / (sigma * kSqrt2Pi);
}

}  // namespace

FitnessProfile FitnessProfile::constant(double r0) {
  return {[r0](double) { return r0; }, "constant"};
}

FitnessProfile FitnessProfile::linear(double r0, double slope) {
  return {[r0, slope](double x) { return r0 + slope * x; }, "linear"};
}

FitnessProfile FitnessProfile::quadratic(double r0, double s) {
  return {[r0, s](double x) { return r0 - s * x * x; }, "quadratic"};
}

FitnessProfile FitnessProfile::gaussian_peak(double r0, double s) {
  return {[r0, s](double x) { return r0 * std::exp(-s * x * x); }, "gaussian"};
}

FitnessProfile FitnessProfile::table(std::vector<std::pair<double, double>> points) {
  if (points.size() < 2)
    throw InvalidArgumentError("fitness table needs at least two points");
  for (std::size_t i = 0; i + 1 < points.size(); ++i)
    if (!(points[i].first < points[i + 1].first))
      throw InvalidArgumentError("fitness table x-values must be strictly increasing");
  auto eval = [pts = std::move(points)](double x) {
    if (x <= pts.front().first) return pts.front().second;
    if (x >= pts.back().first) return pts.back().second;
    auto hi = std::upper_bound(
        pts.begin(), pts.end(), x,
        [](double v, const std::pair<double, double>& p) { return v < p.first; });
    auto lo = hi - 1;
    const double t = (x - lo->first) / (hi->first - lo->first);
    return lo->second + t * (hi->second - lo->second);
  };
  return {std::move(eval), "table"};
}

FitnessProfile FitnessProfile::custom(std::function<double(double)> f) {
  return {std::move(f), "custom"};
}

MutationKernel MutationKernel::gaussian_difference(double mu, double sigma) {
  if (!(mu >= 0.0)) throw InvalidArgumentError("mu must be nonnegative");
  if (!(sigma > 0.0)) throw InvalidArgumentError("sigma must be positive");
  return {[mu, sigma](double x, double y) { return mu * normal_density(x - y, sigma); },
          "gaussian-difference"};
}

MutationKernel MutationKernel::house_of_cards(double mu,
                                              std::function<double(double)> m) {
  if (!(mu >= 0.0)) throw InvalidArgumentError("mu must be nonnegative");
  return {[mu, m = std::move(m)](double x, double) { return mu * m(x); },
          "house-of-cards"};
}

MutationKernel MutationKernel::house_of_cards_uniform(double mu, double m_value) {
  if (!(m_value >= 0.0)) throw InvalidArgumentError("m must be nonnegative");
  return house_of_cards(mu, [m_value](double) { return m_value; });
}

MutationKernel MutationKernel::exponential_tilted(double gamma,
                                                  std::function<double(double)> h) {
  return {[gamma, h = std::move(h)](double x, double y) {
            return std::exp(gamma * (x - y)) * h(std::abs(x - y));
          },
          "exponential-tilted"};
}

MutationKernel MutationKernel::regularized_gamma(double mu, double theta,
                                                 double d, double eps) {
  if (!(mu >= 0.0)) throw InvalidArgumentError("mu must be nonnegative");
  if (!(theta > 0.0) || !(theta < 1.0))
    throw InvalidArgumentError("theta must lie in (0, 1)");
  if (!(d > 0.0)) throw InvalidArgumentError("d must be positive");
  if (!(eps > 0.0))
    throw InvalidArgumentError("eps must be positive; the unregularized kernel has a pole at x = y");
  const double norm = mu * 0.5 * std::pow(d, theta) / std::tgamma(theta);
  return {[norm, theta, d, eps](double x, double y) {
            const double z = std::abs(x - y) + eps;
            return norm * std::pow(z, theta - 1.0) * std::exp(-d * z);
          },
          "regularized-gamma"};
}

MutationKernel MutationKernel::box(double mu, double x_lo, double x_hi,
                                   double y_lo, double y_hi) {
  if (!(mu >= 0.0)) throw InvalidArgumentError("mu must be nonnegative");
  return {[=](double x, double y) {
            return (x >= x_lo && x <= x_hi && y >= y_lo && y <= y_hi) ? mu : 0.0;
          },
          "box"};
}

MutationKernel MutationKernel::custom(std::function<double(double, double)> f) {
  return {std::move(f), "custom"};
}

double total_mutation_rate(const MutationKernel& kernel, double x,
                           const QuadratureRule& quad) {
  try {
    return apply(quad, [&](double y) { return kernel(y, x); });
  } catch (const EvaluationError& e) {
    throw InvalidModelError("mutation kernel evaluation failed: " +
                            std::string(e.what()));
  }
}

double LossFunction::u1(double x) const {
  return apply(grid_, [&](double y) { return kernel_(y, x); });
}

LossFunction loss_function(const ModelSpec& model, std::size_t grid_resolution,
                           const LossOptions& opts) {
  if (grid_resolution < 2)
    throw InvalidArgumentError("grid_resolution must be at least 2");
  const Domain& d = model.domain;
  Partition fine = uniform_partition(d.lower(opts.truncation_level),
                                     d.upper(opts.truncation_level),
                                     grid_resolution);
  fine.level = opts.truncation_level;
  QuadratureRule rule{std::move(fine)};

  LossFunction probe(model.kernel.eval, model.fitness.eval, rule, 0.0);
  double w0_min = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < rule.size(); ++k) {
    const double x = rule.partition.points[k];
    const double u1 = probe.u1(x);
    if (!std::isfinite(u1) || std::abs(u1) > opts.u1_cap)
      throw InvalidModelError("(U2) violation: u1 unbounded at x = " +
                              std::to_string(x));
    const double r = model.fitness(x);
    if (!std::isfinite(r))
      throw InvalidModelError("fitness non-finite at x = " + std::to_string(x));
    w0_min = std::min(w0_min, u1 - r);
  }
  const double shift = opts.renormalize ? w0_min : opts.shift_override;
  return LossFunction(model.kernel.eval, model.fitness.eval, std::move(rule),
                      shift);
}

double hille_tamarkin_norm(const MutationKernel& kernel,
                           const std::function<double(double)>& w, double alpha,
                           const Partition& grid) {
  if (!(alpha > 0.0)) throw InvalidArgumentError("alpha must be positive");
  const std::size_t n = grid.size();
  std::vector<double> denom(n);
  for (std::size_t l = 0; l < n; ++l) {
    denom[l] = w(grid.points[l]) + alpha;
    if (!(denom[l] > 0.0))
      throw PoleError("w + alpha must stay positive on the grid");
  }
  std::vector<double> terms(n);
  for (std::size_t k = 0; k < n; ++k) {
    double sup = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
      const double v = kernel(grid.points[k], grid.points[l]) / denom[l];
      if (std::isnan(v))
        throw InvalidModelError("kernel evaluation returned NaN");
      sup = std::max(sup, std::abs(v));
    }
    terms[k] = grid.weight(k) * sup;
  }
  return pairwise_sum(terms);
}

}  // namespace coa
