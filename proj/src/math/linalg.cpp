#include "math/linalg.hpp"

#include <cmath>
#include <string>

#include "error.hpp"

namespace gprc::math {

Matrix Matrix::identity(std::size_t n, double scale) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = scale;
  return m;
}

Matrix cholesky_lower(const Matrix& a) {
  require(a.rows() == a.cols(), Status::shape_mismatch,
          "cholesky_lower: matrix must be square");
  const std::size_t n = a.rows();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = a(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (!(diag > 0.0) || !std::isfinite(diag)) {
      fail(Status::singular,
           "cholesky_lower: leading minor " + std::to_string(j + 1) +
               " is not positive definite");
    }
    const double root = std::sqrt(diag);
    l(j, j) = root;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / root;
    }
  }
  return l;
}

std::vector<double> forward_solve(const Matrix& lower, std::span<const double> b) {
  const std::size_t n = lower.rows();
  require(b.size() == n, Status::shape_mismatch, "forward_solve: size mismatch");
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= lower(i, k) * x[k];
    x[i] = s / lower(i, i);
  }
  return x;
}

std::vector<double> backward_solve_transpose(const Matrix& lower, std::span<const double> b) {
  const std::size_t n = lower.rows();
  require(b.size() == n, Status::shape_mismatch,
          "backward_solve_transpose: size mismatch");
  std::vector<double> x(n);
  for (std::size_t ii = n; ii > 0; --ii) {
    const std::size_t i = ii - 1;
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= lower(k, i) * x[k];
    x[i] = s / lower(i, i);
  }
  return x;
}

std::vector<double> cholesky_solve(const Matrix& lower, std::span<const double> b) {
  const std::vector<double> y = forward_solve(lower, b);
  return backward_solve_transpose(lower, y);
}

std::vector<double> matvec(const Matrix& a, std::span<const double> x) {
  require(x.size() == a.cols(), Status::shape_mismatch, "matvec: size mismatch");
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    const auto row = a.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) s += row[j] * x[j];
    y[i] = s;
  }
  return y;
}

double dot(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), Status::shape_mismatch, "dot: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace gprc::math
