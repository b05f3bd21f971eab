#pragma once

#include <cstddef>
#include <vector>

namespace coa {

/// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double value = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, value) {}

  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const double* row(std::size_t i) const { return data_.data() + i * cols_; }
  double* row(std::size_t i) { return data_.data() + i * cols_; }

  double min_entry() const;
  double max_entry() const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// y = M x. Rows are independent; the reduction order within a row is fixed,
/// so the result does not depend on any scheduling.
void matvec(const Matrix& m, const std::vector<double>& x,
            std::vector<double>& y);

}  // namespace coa
