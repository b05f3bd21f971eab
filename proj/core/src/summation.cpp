#include "coa/summation.hpp"

namespace coa {

namespace {

double sum_range(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return sum_range(v, half) + sum_range(v + half, n - half);
}

}  // namespace

double pairwise_sum(std::span<const double> terms) {
  return sum_range(terms.data(), terms.size());
}

}  // namespace coa
