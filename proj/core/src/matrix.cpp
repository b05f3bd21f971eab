#include "coa/matrix.hpp"

#include <algorithm>

#include "coa/errors.hpp"

namespace coa {

double Matrix::min_entry() const {
  return data_.empty() ? 0.0 : *std::min_element(data_.begin(), data_.end());
}

double Matrix::max_entry() const {
  return data_.empty() ? 0.0 : *std::max_element(data_.begin(), data_.end());
}

void matvec(const Matrix& m, const std::vector<double>& x,
            std::vector<double>& y) {
  if (x.size() != m.cols())
    throw InvalidArgumentError("matvec dimension mismatch");
  y.resize(m.rows());
  const std::size_t n = m.cols();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double* row = m.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
}

}  // namespace coa
