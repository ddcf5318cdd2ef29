#include "sclrom/random.hpp"

#include <cmath>
#include <numbers>

namespace sclrom {

double GaussianSource::uniform() {
  // 53 random mantissa bits, shifted off zero so log() below stays finite.
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double GaussianSource::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Complex GaussianSource::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

Matrix GaussianSource::complex_matrix(Index rows, Index cols) {
  Matrix out(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) out(i, j) = complex_normal();
  }
  return out;
}

Vector GaussianSource::complex_vector(Index size) {
  Vector out(size);
  for (Index i = 0; i < size; ++i) out(i) = complex_normal();
  return out;
}

Vector normalize_column_phases(Matrix& columns) {
  Vector phases = Vector::Ones(columns.cols());
  for (Index j = 0; j < columns.cols(); ++j) {
    Index pivot = 0;
    double best = -1.0;
    for (Index i = 0; i < columns.rows(); ++i) {
      const double mag = std::abs(columns(i, j));
      if (mag > best) {
        best = mag;
        pivot = i;
      }
    }
    if (best <= 0.0) continue;
    const Complex phase = std::conj(columns(pivot, j)) / best;
    columns.col(j) *= phase;
    columns(pivot, j) = Complex(best, 0.0);
    phases(j) = phase;
  }
  return phases;
}

Matrix random_orthonormal_frame(Index n, Index k, std::uint64_t seed) {
  if (k > n) throw Error(ErrorCode::DimensionTooSmall, "frame wider than its ambient dimension");
  GaussianSource source(seed);
  Matrix q = source.complex_matrix(n, k);
  for (Index j = 0; j < k; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (Index i = 0; i < j; ++i) {
        const Complex proj = q.col(i).dot(q.col(j));
        q.col(j) -= proj * q.col(i);
      }
    }
    const double norm = q.col(j).norm();
    if (norm == 0.0) throw Error(ErrorCode::NumericalFailure, "random frame lost rank");
    q.col(j) /= norm;
  }
  normalize_column_phases(q);
  return q;
}

}  // namespace sclrom
