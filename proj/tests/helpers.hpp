#pragma once

#include <cmath>

#include "coa/model.hpp"

namespace coa::testing {

/// House-of-cards benchmark: I = [-1,1], r(x) = 1 - x^2, u(x,y) = 1/2.
/// Closed-form equilibrium p(x) = (1/2)/(lambda + x^2) with
/// arctan(1/sqrt(lambda))/sqrt(lambda) = 1.
inline ModelSpec hoc_benchmark() {
  return {Domain::compact(-1.0, 1.0), FitnessProfile::quadratic(1.0, 1.0),
          MutationKernel::house_of_cards_uniform(1.0, 0.5)};
}

/// Compact gaussian benchmark: I = [-1,1], r(x) = 1 - x^2,
/// gaussian-difference kernel sigma = 0.3, mu = 1.
inline ModelSpec gaussian_compact_benchmark() {
  return {Domain::compact(-1.0, 1.0), FitnessProfile::quadratic(1.0, 1.0),
          MutationKernel::gaussian_difference(1.0, 0.3)};
}

/// Real-line gaussian benchmark: r(x) = exp(-x^2), gaussian-difference
/// kernel sigma = 0.3, mu = 1, truncation L0 = 4.
inline ModelSpec gaussian_real_line_benchmark() {
  return {Domain::real_line(4.0), FitnessProfile::gaussian_peak(1.0, 1.0),
          MutationKernel::gaussian_difference(1.0, 0.3)};
}

}  // namespace coa::testing
