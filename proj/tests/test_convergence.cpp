#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "coa/convergence.hpp"
#include "coa/errors.hpp"
#include "helpers.hpp"

using namespace coa;

namespace {

// lambda* of the house-of-cards benchmark, from the 1e6-cell reference
// quadrature bisection (see the acceptance suite for the recomputation).
constexpr double kHocLambda = 0.74017388439507026;

}  // namespace

TEST_CASE("constant model solves exactly at every level") {
  const ModelSpec model{Domain::compact(0.0, 1.0), FitnessProfile::constant(0.4),
                        MutationKernel::custom([](double, double) { return 0.7; })};
  const ConvergenceReport report =
      refinement_study(model, Method::Nystrom, 0, 3, SolverConfig{}, {.base_cells = 16});
  REQUIRE(report.levels.size() == 3);
  for (const LevelRecord& rec : report.levels) {
    CHECK(std::abs(rec.lambda_shifted - 0.7) <= 1e-13);
    CHECK(std::abs(rec.lambda_raw - 0.4) <= 1e-13);
  }
  for (double tv : report.tv_consecutive) CHECK(tv <= 1e-14);

  std::size_t prev_n = 0;
  for (const LevelRecord& rec : report.levels) {
    CHECK(rec.n > prev_n);
    prev_n = rec.n;
  }
}

TEST_CASE("house-of-cards study approaches the closed-form eigenvalue") {
  const ConvergenceReport report = refinement_study(
      testing::hoc_benchmark(), Method::Nystrom, 0, 4, SolverConfig{}, {.base_cells = 64});
  REQUIRE(report.levels.size() == 4);
  double prev_err = std::numeric_limits<double>::infinity();
  for (const LevelRecord& rec : report.levels) {
    const double err = std::abs(rec.lambda_raw - kHocLambda);
    CHECK(err < prev_err);
    prev_err = err;
  }
  // Empirical order is two: consecutive eigenvalue gaps shrink about 4x.
  for (double ratio : report.cauchy_ratio) CHECK(ratio <= 0.6);

  for (const LevelRecord& rec : report.levels) {
    CHECK(rec.lambda_shifted > 0.0);
    CHECK(rec.residual_a <= 1e-9);
    CHECK(rec.residual_k <= 1e-9);
  }
}

TEST_CASE("eigenvalues stay within the coarse bound at every level") {
  const ModelSpec model = testing::hoc_benchmark();
  const ConvergenceReport report = refinement_study(
      model, Method::Nystrom, 0, 3, SolverConfig{}, {.base_cells = 64});
  // max w <= 1 and max u * |I| = 0.5 * 2 = 1 for this model.
  for (const LevelRecord& rec : report.levels) {
    CHECK(rec.lambda_shifted > 0.0);
    CHECK(rec.lambda_shifted <= 2.0);
  }
}

TEST_CASE("real-line study tracks tails and tv decay") {
  const ConvergenceReport report =
      refinement_study(testing::gaussian_real_line_benchmark(),
                       Method::GalerkinSampled, 0, 4, SolverConfig{}, {.base_cells = 128});
  REQUIRE(report.levels.size() == 4);
  REQUIRE(report.tv_consecutive.size() == 3);
  CHECK(report.tv_consecutive[1] < report.tv_consecutive[0]);
  CHECK(report.tv_consecutive[2] < report.tv_consecutive[1]);
  CHECK(report.levels.back().tail_mass <= 1e-6);
  CHECK_FALSE(report.tail_flagged);
  for (const LevelRecord& rec : report.levels) CHECK(rec.residual_a <= 1e-9);
}

TEST_CASE("shallow real-line studies flag the unresolved tail") {
  const ConvergenceReport report =
      refinement_study(testing::gaussian_real_line_benchmark(),
                       Method::GalerkinSampled, 0, 2, SolverConfig{}, {.base_cells = 128});
  CHECK(report.levels.back().tail_mass > 1e-6);
  CHECK(report.tail_flagged);
}

TEST_CASE("study needs at least two levels") {
  CHECK_THROWS_AS(refinement_study(testing::hoc_benchmark(), Method::Nystrom, 0, 1,
                                   SolverConfig{}, {}),
                  InvalidArgumentError);
}

TEST_CASE("a failing level aborts with the partial report attached") {
  setenv("COA_MAX_N", "256", 1);
  try {
    refinement_study(testing::hoc_benchmark(), Method::Nystrom, 0, 3,
                     SolverConfig{}, {.base_cells = 128});
    unsetenv("COA_MAX_N");
    FAIL("expected StudyError");
  } catch (const StudyError& e) {
    unsetenv("COA_MAX_N");
    CHECK(e.partial.levels.size() == 2);
  }
}

TEST_CASE("cross-method gaps vanish for constant kernels") {
  const ModelSpec model{Domain::compact(0.0, 1.0), FitnessProfile::constant(1.0),
                        MutationKernel::custom([](double, double) { return 0.6; })};
  const MethodComparison cmp =
      cross_method_compare(model, 0, SolverConfig{}, {.base_cells = 64});
  CHECK(cmp.lambda_gap <= 1e-12);
  CHECK(cmp.tv_gap <= 1e-12);
}

TEST_CASE("cross-method eigenvalues converge as the sub-quadrature refines") {
  // The averaged eigenvalue converges with s to the exact-cell-average
  // eigenvalue, not to the sampled one (at s = 1 the two assemblies
  // coincide). Measure against a high-order reference.
  const ModelSpec model = testing::gaussian_compact_benchmark();
  StudyOptions ref_opts;
  ref_opts.base_cells = 128;
  ref_opts.sub_quadrature = 32;
  const double lambda_ref =
      cross_method_compare(model, 0, SolverConfig{}, ref_opts).lambda_averaged;

  double prev_gap = std::numeric_limits<double>::infinity();
  for (int s : {1, 2, 4, 8}) {
    StudyOptions opts;
    opts.base_cells = 128;
    opts.sub_quadrature = s;
    const MethodComparison cmp = cross_method_compare(model, 0, SolverConfig{}, opts);
    const double gap = std::abs(cmp.lambda_averaged - lambda_ref);
    CHECK(gap < prev_gap);
    // The sampled-vs-averaged disagreement stays at the discretization scale.
    CHECK(cmp.lambda_gap <= 1e-4);
    prev_gap = gap;
  }
}

TEST_CASE("oracle comparison against itself is exact") {
  const SolverConfig cfg;
  const StudyOptions opts{.base_cells = 128};
  const SolveOutcome out =
      solve_model(testing::hoc_benchmark(), Method::Nystrom, 0, cfg, opts);
  const Partition part = out.op.partition;
  const std::vector<double> values = out.result.density.values;
  const auto self = [&](double x) {
    for (std::size_t k = 0; k < part.size(); ++k)
      if (x >= part.edges[k] && x < part.edges[k + 1]) return values[k];
    return 0.0;
  };
  const OracleComparison cmp =
      oracle_compare(testing::hoc_benchmark(), out.result.lambda_raw, self, 0, cfg, opts);
  CHECK(cmp.lambda_error == 0.0);
  CHECK(cmp.tv_error <= 1e-12);
}

TEST_CASE("oracle comparison on the closed-form benchmark") {
  const SolverConfig cfg;
  const auto p_star = [](double x) { return 0.5 / (kHocLambda + x * x); };

  const OracleComparison at512 = oracle_compare(testing::hoc_benchmark(), kHocLambda,
                                                p_star, 0, cfg, {.base_cells = 512});
  CHECK(at512.lambda_error <= 1e-3);

  const OracleComparison at1024 = oracle_compare(testing::hoc_benchmark(), kHocLambda,
                                                 p_star, 0, cfg, {.base_cells = 1024});
  CHECK(at1024.lambda_error / at512.lambda_error <= 0.6);
}

TEST_CASE("report CSV round-trips byte-identically") {
  const ConvergenceReport report = refinement_study(
      testing::hoc_benchmark(), Method::Nystrom, 0, 3, SolverConfig{}, {.base_cells = 32});
  const std::string csv = to_csv(report);
  const ConvergenceReport parsed = report_from_csv(csv);
  CHECK(to_csv(parsed) == csv);
  REQUIRE(parsed.levels.size() == report.levels.size());
  CHECK(parsed.levels[1].lambda_raw == report.levels[1].lambda_raw);
  CHECK(parsed.tv_consecutive == report.tv_consecutive);

  CHECK_THROWS_AS(report_from_csv("bogus,header\n1,2\n"), Error);
}
