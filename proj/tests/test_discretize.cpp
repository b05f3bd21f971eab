#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "coa/discretize.hpp"
#include "coa/errors.hpp"
#include "helpers.hpp"

using namespace coa;

namespace {

LossFunction zero_w_loss(const ModelSpec& model) {
  // Constant-kernel models renormalize to w = 0; keep a handle to the loss.
  return loss_function(model, 256);
}

}  // namespace

TEST_CASE("nystrom assembly on a single cell") {
  const ModelSpec model{Domain::compact(0.0, 1.0), FitnessProfile::constant(0.3),
                        MutationKernel::custom([](double, double) { return 0.8; })};
  // Suppress renormalization so w keeps the value 0.3.
  LossOptions lo;
  lo.renormalize = false;
  lo.shift_override = 0.2;
  const LossFunction loss = loss_function(model, 256, lo);

  const DiscreteOperator op = nystrom_matrices(model, loss, uniform_partition(0.0, 1.0, 1));
  REQUIRE(op.size() == 1);
  CHECK(op.w_diag[0] == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(op.u_matrix(0, 0) == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(op.r_samples[0] == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(op.shift == 0.2);
}

TEST_CASE("nystrom assembly weights columns by cell width") {
  const ModelSpec model{Domain::compact(0.0, 1.0), FitnessProfile::constant(1.0),
                        MutationKernel::custom([](double, double) { return 1.0; })};
  const LossFunction loss = zero_w_loss(model);
  const DiscreteOperator op = nystrom_matrices(model, loss, uniform_partition(0.0, 1.0, 2));
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t l = 0; l < 2; ++l)
      CHECK(op.u_matrix(k, l) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("house-of-cards rows follow m(t_k)") {
  const ModelSpec model{Domain::compact(0.0, 1.0), FitnessProfile::constant(1.0),
                        MutationKernel::house_of_cards(1.0, [](double x) { return 2.0 * x; })};
  const LossFunction loss = loss_function(model, 256);
  const DiscreteOperator op = nystrom_matrices(model, loss, uniform_partition(0.0, 1.0, 2));
  CHECK(op.u_matrix(0, 0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(op.u_matrix(0, 1) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(op.u_matrix(1, 0) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(op.u_matrix(1, 1) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("galerkin sampled equals nystrom bitwise") {
  const ModelSpec model = testing::gaussian_compact_benchmark();
  const LossFunction loss = loss_function(model, 256);
  const Partition part = uniform_partition(-1.0, 1.0, 16);
  const DiscreteOperator a = nystrom_matrices(model, loss, part);
  const DiscreteOperator b = galerkin_matrices(model, loss, part, Method::GalerkinSampled);
  CHECK(a.u_matrix == b.u_matrix);
  CHECK(a.w_diag == b.w_diag);
  CHECK(a.r_samples == b.r_samples);
  CHECK(b.method == Method::GalerkinSampled);
}

TEST_CASE("averaging a constant kernel changes nothing") {
  const ModelSpec model{Domain::compact(0.0, 1.0), FitnessProfile::constant(1.0),
                        MutationKernel::custom([](double, double) { return 0.6; })};
  const LossFunction loss = zero_w_loss(model);
  const Partition part = uniform_partition(0.0, 1.0, 8);
  const DiscreteOperator sampled = galerkin_matrices(model, loss, part, Method::GalerkinSampled);
  const DiscreteOperator averaged =
      galerkin_matrices(model, loss, part, Method::GalerkinAveraged, 4);
  for (std::size_t k = 0; k < 8; ++k)
    for (std::size_t l = 0; l < 8; ++l)
      CHECK(std::abs(averaged.u_matrix(k, l) - sampled.u_matrix(k, l)) <= 1e-15);
}

TEST_CASE("averaged entries are exact cell means for affine kernels") {
  const ModelSpec model{Domain::compact(0.0, 1.0), FitnessProfile::constant(1.0),
                        MutationKernel::custom([](double x, double) { return x; })};
  const LossFunction loss = loss_function(model, 256);
  for (int s : {1, 2}) {
    const DiscreteOperator op = galerkin_matrices(
        model, loss, uniform_partition(0.0, 1.0, 2), Method::GalerkinAveraged, s);
    CHECK(op.u_matrix(0, 0) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(op.u_matrix(0, 1) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(op.u_matrix(1, 0) == doctest::Approx(0.375).epsilon(1e-15));
    CHECK(op.u_matrix(1, 1) == doctest::Approx(0.375).epsilon(1e-15));
  }
}

TEST_CASE("sub-quadrature converges entrywise to the true cell averages") {
  // At s = 1 the averaged assembly coincides with the sampled one, so the
  // gap to the sampled matrices starts at zero and grows toward the O(h^2)
  // midpoint-vs-average offset. The quantity that converges with s is the
  // distance to the exact cell averages, taken here at s = 64.
  const ModelSpec model = testing::gaussian_compact_benchmark();
  const LossFunction loss = loss_function(model, 512);
  const Partition part = uniform_partition(-1.0, 1.0, 32);
  const DiscreteOperator reference =
      galerkin_matrices(model, loss, part, Method::GalerkinAveraged, 64);

  double prev_gap = std::numeric_limits<double>::infinity();
  for (int s : {1, 2, 4, 8}) {
    const DiscreteOperator avg =
        galerkin_matrices(model, loss, part, Method::GalerkinAveraged, s);
    double gap = 0.0;
    for (std::size_t k = 0; k < part.size(); ++k)
      for (std::size_t l = 0; l < part.size(); ++l)
        gap = std::max(gap, std::abs(avg.u_matrix(k, l) - reference.u_matrix(k, l)));
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }

  // The averaged family stays within the midpoint-vs-average offset of the
  // sampled assembly at every s.
  const DiscreteOperator sampled =
      galerkin_matrices(model, loss, part, Method::GalerkinSampled);
  double offset = 0.0;
  for (std::size_t k = 0; k < part.size(); ++k)
    for (std::size_t l = 0; l < part.size(); ++l)
      offset = std::max(offset,
                        std::abs(reference.u_matrix(k, l) - sampled.u_matrix(k, l)));
  CHECK(offset <= 1e-3);
}

TEST_CASE("k_alpha scales columns by 1/(w + alpha)") {
  DiscreteOperator op;
  op.partition = uniform_partition(0.0, 1.0, 2);
  op.w_diag = {0.0, 1.0};
  op.u_matrix = Matrix(2, 2, 0.5);
  op.r_samples = {0.0, 0.0};

  const Matrix k = k_alpha_matrix(op, 1.0);
  CHECK(k(0, 0) == doctest::Approx(0.5));
  CHECK(k(1, 0) == doctest::Approx(0.5));
  CHECK(k(0, 1) == doctest::Approx(0.25));
  CHECK(k(1, 1) == doctest::Approx(0.25));

  // Entries shrink monotonically as alpha grows.
  double prev = k_alpha_matrix(op, 1.0).max_entry();
  for (double alpha : {10.0, 100.0, 1000.0}) {
    const double cur = k_alpha_matrix(op, alpha).max_entry();
    CHECK(cur < prev);
    prev = cur;
  }

  CHECK_THROWS_AS(k_alpha_matrix(op, 0.0), PoleError);
  CHECK_THROWS_AS(k_alpha_matrix(op, -0.5), PoleError);
}

TEST_CASE("embed_density normalizes in the induced norm") {
  const Partition part = uniform_partition(0.0, 1.0, 2);

  double factor = 0.0;
  const StepDensity same = embed_density(part, {1.0, 1.0}, &factor);
  CHECK(same.values[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(factor == doctest::Approx(1.0).epsilon(1e-15));

  const StepDensity halved = embed_density(part, {2.0, 2.0}, &factor);
  CHECK(halved.values[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(factor == doctest::Approx(2.0).epsilon(1e-15));

  const StepDensity skew = embed_density(part, {4.0, 0.0}, &factor);
  CHECK(skew.values[0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(skew.values[1] == 0.0);
  CHECK(skew.induced_norm() == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(embed_density(part, {0.0, 0.0}), DegenerateDensityError);

  // Embedding an already-normalized vector is the identity up to scaling.
  const StepDensity again = embed_density(part, skew.values, &factor);
  CHECK(std::abs(factor - 1.0) <= 1e-12);
}

TEST_CASE("tv_distance on shared and nested partitions") {
  const Partition part = uniform_partition(0.0, 1.0, 2);
  const StepDensity uniform{part, {1.0, 1.0}};
  const StepDensity left{part, {2.0, 0.0}};
  CHECK(tv_distance(uniform, uniform) == 0.0);
  CHECK(tv_distance(uniform, left) == doctest::Approx(0.5).epsilon(1e-15));

  // The same density expressed on a refinement has distance zero.
  const Partition fine = uniform_partition(0.0, 1.0, 4);
  const StepDensity left_fine{fine, {2.0, 2.0, 0.0, 0.0}};
  CHECK(tv_distance(left, left_fine) == 0.0);

  // Disjoint unit masses are at distance one.
  const StepDensity here{uniform_partition(0.0, 1.0, 2), {1.0, 1.0}};
  const StepDensity there{uniform_partition(2.0, 3.0, 2), {1.0, 1.0}};
  CHECK(tv_distance(here, there) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("tv_distance is a metric on random step densities") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> value(0.0, 2.0);
  const Partition part = uniform_partition(-1.0, 1.0, 8);
  const auto random_density = [&]() {
    std::vector<double> v(part.size());
    for (double& x : v) x = value(rng) + 1e-3;
    return embed_density(part, std::move(v));
  };
  for (int trial = 0; trial < 50; ++trial) {
    const StepDensity a = random_density();
    const StepDensity b = random_density();
    const StepDensity c = random_density();
    const double ab = tv_distance(a, b);
    CHECK(ab == tv_distance(b, a));
    CHECK(ab >= 0.0);
    CHECK(tv_distance(a, a) == 0.0);
    CHECK(ab <= tv_distance(a, c) + tv_distance(c, b) + 1e-14);
  }
}

TEST_CASE("column mass matches the level quadrature of the kernel") {
  const ModelSpec model = testing::gaussian_compact_benchmark();
  const LossFunction loss = loss_function(model, 4096);

  double prev_gap = std::numeric_limits<double>::infinity();
  for (int level = 3; level <= 5; ++level) {
    const Partition part = level_partition(model.domain, 8, level);
    const DiscreteOperator op = nystrom_matrices(model, loss, part);
    const QuadratureRule rule{part};
    double max_gap = 0.0;
    for (std::size_t l = 0; l < part.size(); ++l) {
      double col = 0.0;
      for (std::size_t k = 0; k < part.size(); ++k)
        col += part.weight(k) * op.u_matrix(k, l);
      const double qn = part.weight(l) *
                        apply(rule, [&](double y) { return model.kernel(y, part.points[l]); });
      CHECK(std::abs(col - qn) <= 1e-13);
      max_gap = std::max(max_gap,
                         std::abs(qn / part.weight(l) - loss.u1(part.points[l])));
    }
    CHECK(max_gap < prev_gap);
    prev_gap = max_gap;
  }
}

TEST_CASE("operator dump is stable") {
  const ModelSpec model{Domain::compact(0.0, 1.0), FitnessProfile::constant(1.0),
                        MutationKernel::house_of_cards(1.0, [](double x) { return 2.0 * x; })};
  const LossFunction loss = loss_function(model, 256);
  const DiscreteOperator op = nystrom_matrices(model, loss, uniform_partition(0.0, 1.0, 2));

  std::ostringstream os;
  write_operator(os, op);
  const std::string text = os.str();
  CHECK(text.substr(0, 10) == "2 nystrom ");
  CHECK(text.find("0.25 0.25\n0.75 0.75\n") != std::string::npos);

  std::ostringstream again;
  write_operator(again, op);
  CHECK(text == again.str());
}

TEST_CASE("matrix size cap respects COA_MAX_N") {
  CHECK(max_matrix_cells() == 8192);
  setenv("COA_MAX_N", "256", 1);
  CHECK(max_matrix_cells() == 256);
  const ModelSpec model = testing::gaussian_compact_benchmark();
  const LossFunction loss = loss_function(model, 256);
  CHECK_THROWS_AS(nystrom_matrices(model, loss, uniform_partition(-1.0, 1.0, 512)),
                  InvalidArgumentError);
  unsetenv("COA_MAX_N");
  CHECK(max_matrix_cells() == 8192);
}
