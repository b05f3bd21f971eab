#include <doctest.h>

#include <cmath>

#include "coa/errors.hpp"
#include "coa/maxprinciple.hpp"
#include "helpers.hpp"

using namespace coa;

namespace {

constexpr double kSqrt2Pi = 2.5066282746310002;

std::function<double(double)> gaussian_profile(double sigma) {
  return [sigma](double z) {
    const double s = z / sigma;
    return std::exp(-0.5 * s * s) / (sigma * kSqrt2Pi);
  };
}

}  // namespace

TEST_CASE("symmetric kernels have zero mutational loss, exactly") {
  const ModelSpec model = testing::gaussian_compact_benchmark();
  const QuadratureRule rule{uniform_partition(-1.0, 1.0, 64)};
  for (double x : {-0.9, -0.25, 0.0, 0.6})
    CHECK(mutational_loss_g(model, x, rule) == 0.0);

  const MaxPrincipleEstimate est =
      max_principle_estimate(model, uniform_partition(-1.0, 1.0, 8));
  for (double g : est.g_values) CHECK(g == 0.0);
  // max of 1 - x^2 over the 4x-refined midpoints: nearest point to 0 is 1/32.
  CHECK(est.lambda_mp == doctest::Approx(1.0 - 1.0 / 1024.0).epsilon(1e-15));
  CHECK(std::abs(est.argmax) == doctest::Approx(1.0 / 32.0).epsilon(1e-12));
}

TEST_CASE("one-sided kernels lose their full mutation rate") {
  const ModelSpec model{
      Domain::compact(0.0, 1.0), FitnessProfile::constant(1.0),
      MutationKernel::custom([](double x, double y) {
        return x >= y ? std::exp(-(x - y)) : 0.0;
      })};
  const QuadratureRule rule{uniform_partition(0.0, 1.0, 128)};
  const double x = 0.317;  // off the quadrature grid, so u(x,y) u(y,x) = 0 at all nodes
  const double g = mutational_loss_g(model, x, rule);
  const double u_total = apply(rule, [&](double y) { return model.kernel(x, y); });
  CHECK(g == doctest::Approx(u_total).epsilon(1e-14));
}

TEST_CASE("tilted gaussian loss matches the closed form") {
  const double gamma = 0.5, sigma = 0.3;
  const ModelSpec model{Domain::compact(-6.0, 6.0), FitnessProfile::constant(0.0),
                        MutationKernel::exponential_tilted(gamma, gaussian_profile(sigma))};
  const QuadratureRule rule{uniform_partition(-6.0, 6.0, 4096)};
  const double expected = std::exp(0.5 * gamma * gamma * sigma * sigma) - 1.0;
  const double g0 = mutational_loss_g(model, 0.1, rule);
  CHECK(g0 == doctest::Approx(expected).epsilon(1e-6));
  // Away from the boundary the loss is x-independent.
  CHECK(std::abs(mutational_loss_g(model, -0.4, rule) - g0) <= 1e-8);
}

TEST_CASE("negative kernel samples are rejected") {
  const ModelSpec model{Domain::compact(0.0, 1.0), FitnessProfile::constant(0.0),
                        MutationKernel::custom([](double x, double y) { return x - y; })};
  const QuadratureRule rule{uniform_partition(0.0, 1.0, 16)};
  CHECK_THROWS_AS(mutational_loss_g(model, 0.9, rule), InvalidModelError);
}

TEST_CASE("constant fitness decomposes the estimate") {
  const double gamma = 0.4, sigma = 0.25, r0 = 2.0;
  const ModelSpec model{Domain::compact(-3.0, 3.0), FitnessProfile::constant(r0),
                        MutationKernel::exponential_tilted(gamma, gaussian_profile(sigma))};
  const MaxPrincipleEstimate est =
      max_principle_estimate(model, uniform_partition(-3.0, 3.0, 64));
  double min_g = est.g_values[0];
  for (double g : est.g_values) min_g = std::min(min_g, g);
  CHECK(est.lambda_mp == doctest::Approx(r0 - min_g).epsilon(1e-14));
}

TEST_CASE("scaling family") {
  const auto h = gaussian_profile(0.3);

  const MutationKernel base = MutationKernel::exponential_tilted(0.7, h);
  const MutationKernel unit = scaling_family(h, 0.7, 1.0);
  for (double x : {-1.0, 0.2})
    for (double y : {-0.5, 0.9})
      CHECK(unit(x, y) == base(x, y));

  // Mass preservation under the scaling: integral of nu h(nu |z|) dz.
  const QuadratureRule wide{uniform_partition(-8.0, 8.0, 8192)};
  const double mass1 = apply(wide, [&](double z) { return h(std::abs(z)); });
  for (double nu : {2.0, 4.0, 8.0}) {
    const MutationKernel k = scaling_family(h, 0.0, nu);
    const double mass = apply(wide, [&](double z) { return k(z, 0.0); });
    CHECK(std::abs(mass - mass1) <= 1e-6);
  }

  // gamma = 0, nu = 2 halves the width of a gaussian profile.
  const MutationKernel doubled = scaling_family(h, 0.0, 2.0);
  const MutationKernel narrow = MutationKernel::gaussian_difference(1.0, 0.15);
  for (double z : {-0.3, 0.0, 0.04, 0.2})
    CHECK(doubled(z, 0.0) == doctest::Approx(narrow(z, 0.0)).epsilon(1e-15));

  CHECK_THROWS_AS(scaling_family(h, 0.0, 0.0), InvalidArgumentError);
  CHECK_THROWS_AS(scaling_family(h, 0.0, -1.0), InvalidArgumentError);
}

TEST_CASE("locality experiment levels follow the mesh-coupling rule") {
  LocalityFamily family;
  family.domain = Domain::compact(-1.0, 1.0);
  family.fitness = FitnessProfile::quadratic(1.0, 1.0);
  family.h = gaussian_profile(0.3);
  family.gamma = 0.0;
  family.width_scale = 0.3;

  const LocalityTable table =
      locality_experiment(family, {1.0, 16.0}, 0, SolverConfig{}, {.base_cells = 128});
  REQUIRE(table.rows.size() == 2);
  CHECK(table.rows[0].level == 0);
  CHECK(table.rows[0].n == 128);
  // nu = 16 needs mesh <= 0.3/64, i.e. N >= 427 on a length-2 interval.
  CHECK(table.rows[1].level == 2);
  CHECK(table.rows[1].n == 512);

  // Symmetric kernel: lambda_MP equals the grid maximum of r.
  for (const LocalityRow& row : table.rows)
    CHECK(row.lambda_mp == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(table.monotone_nonincreasing);

  CHECK_THROWS_AS(locality_experiment(family, {}, 0, SolverConfig{}, {}),
                  InvalidArgumentError);
  CHECK_THROWS_AS(locality_experiment(family, {2.0, 1.0}, 0, SolverConfig{}, {}),
                  InvalidArgumentError);
}

TEST_CASE("locality solves are mesh-converged before the trend is read") {
  LocalityFamily family;
  family.domain = Domain::compact(-2.0, 2.0);
  family.fitness = FitnessProfile::gaussian_peak(1.0, 1.0);
  family.h = gaussian_profile(0.3);
  family.gamma = 0.5;
  family.width_scale = 0.3;

  const SolverConfig cfg;
  const StudyOptions coarse{.base_cells = 128};
  const StudyOptions fine{.base_cells = 256};
  const LocalityTable a = locality_experiment(family, {4.0}, 0, cfg, coarse);
  const LocalityTable b = locality_experiment(family, {4.0}, 0, cfg, fine);
  CHECK(std::abs(a.rows[0].lambda_raw - b.rows[0].lambda_raw) <= 1e-4);
}

TEST_CASE("locality table CSV has the documented header") {
  LocalityTable table;
  table.rows.push_back({1.0, 0, 128, 0.5, 0.75, 0.25});
  const std::string csv = to_csv(table);
  CHECK(csv.rfind("nu,level,N,lambda_raw,lambda_mp,gap\n", 0) == 0);
  CHECK(csv.find("0.25") != std::string::npos);
}
