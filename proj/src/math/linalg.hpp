#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gprc::math {

// Dense row-major matrix.  Sized for the moderate problems here (spatial
// fields of a few hundred sites, small regression designs).
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double value = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, value) {}

  static Matrix identity(std::size_t n, double scale = 1.0);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Lower Cholesky factor of a symmetric positive definite matrix.  Throws a
// singular Error naming the 1-based index of the offending leading minor.
Matrix cholesky_lower(const Matrix& a);

std::vector<double> forward_solve(const Matrix& lower, std::span<const double> b);
std::vector<double> backward_solve_transpose(const Matrix& lower, std::span<const double> b);
// Solves (L L^T) x = b given the lower factor.
std::vector<double> cholesky_solve(const Matrix& lower, std::span<const double> b);

std::vector<double> matvec(const Matrix& a, std::span<const double> x);
double dot(std::span<const double> a, std::span<const double> b);

}  // namespace gprc::math
