#pragma once

#include <cmath>
#include <cstring>

#include "sclrom/types.hpp"

namespace sclrom::test {

inline double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

inline double diff(const Matrix& a, const Matrix& b) { return max_abs(a - b); }

inline Matrix from_real(std::initializer_list<std::initializer_list<double>> rows) {
  const Index r = static_cast<Index>(rows.size());
  const Index c = static_cast<Index>(rows.begin()->size());
  Matrix out(r, c);
  Index i = 0;
  for (const auto& row : rows) {
    Index j = 0;
    for (const double v : row) out(i, j++) = Complex(v, 0.0);
    ++i;
  }
  return out;
}

inline Matrix columns(std::initializer_list<std::initializer_list<double>> cols) {
  return from_real(cols).transpose();
}

// Naive power by repeated multiplication, kept separate from library code.
inline Matrix power(const Matrix& a, Index k) {
  Matrix out = Matrix::Identity(a.rows(), a.cols());
  for (Index i = 0; i < k; ++i) out = out * a;
  return out;
}

inline bool bitwise_equal(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i) {
      const Complex x = a(i, j), y = b(i, j);
      if (std::memcmp(&x, &y, sizeof(Complex)) != 0) return false;
    }
  return true;
}

// Gaussian elimination with partial pivoting; independent of Eigen's solvers.
inline Vector solve_dense(Matrix a, Vector b) {
  const Index n = a.rows();
  for (Index k = 0; k < n; ++k) {
    Index pivot = k;
    for (Index i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(pivot, k))) pivot = i;
    a.row(k).swap(a.row(pivot));
    std::swap(b(k), b(pivot));
    for (Index i = k + 1; i < n; ++i) {
      const Complex f = a(i, k) / a(k, k);
      for (Index j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      b(i) -= f * b(k);
    }
  }
  Vector x(n);
  for (Index k = n - 1; k >= 0; --k) {
    Complex acc = b(k);
    for (Index j = k + 1; j < n; ++j) acc -= a(k, j) * x(j);
    x(k) = acc / a(k, k);
  }
  return x;
}

// Minimizer of |A c - y| through the normal equations A*A c = A*y.
inline Vector normal_equations(const Matrix& a, const Vector& y) {
  return solve_dense(a.adjoint() * a, a.adjoint() * y);
}

}  // namespace sclrom::test
