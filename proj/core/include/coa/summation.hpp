#pragma once

#include <cstddef>
#include <span>

namespace coa {

/// Pairwise summation in ascending index order. Deterministic regardless of
/// how the terms were produced, with O(eps log n) rounding error.
double pairwise_sum(std::span<const double> terms);

}  // namespace coa
