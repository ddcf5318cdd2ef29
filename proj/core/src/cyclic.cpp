#include "sclrom/cyclic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sclrom {

VectorSystem::VectorSystem(Matrix columns) : columns_(std::move(columns)) {
  if (columns_.cols() == 0 || columns_.rows() == 0)
    throw Error(ErrorCode::EmptySystem, "vector system has no vectors");
  if (columns_.cols() > columns_.rows())
    throw Error(ErrorCode::DimensionMismatch,
                "system of " + std::to_string(columns_.cols()) + " vectors in C^" +
                    std::to_string(columns_.rows()) + " (need m <= n)");
  for (Index j = 0; j < columns_.cols(); ++j) {
    if (columns_.col(j).squaredNorm() == 0.0) throw ZeroVectorError(j);
  }
}

VectorSystem VectorSystem::from_vectors(std::span<const Vector> vectors) {
  if (vectors.empty()) throw Error(ErrorCode::EmptySystem, "vector system has no vectors");
  const Index n = vectors.front().size();
  Matrix columns(n, static_cast<Index>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    if (vectors[j].size() != n)
      throw Error(ErrorCode::DimensionMismatch, "vectors of unequal dimension");
    columns.col(static_cast<Index>(j)) = vectors[j];
  }
  return VectorSystem(std::move(columns));
}

OrthReport check_orthogonal_system(const VectorSystem& vs, double tol) {
  const Matrix& v = vs.columns();
  const RealVector norms = v.colwise().norm().transpose();
  const Matrix gram = v.adjoint() * v;

  OrthReport report;
  report.min_norm = norms.minCoeff();
  for (Index j = 0; j < v.cols(); ++j) {
    for (Index k = 0; k < v.cols(); ++k) {
      if (j == k) continue;
      report.max_cross = std::max(report.max_cross, std::abs(gram(j, k)) / (norms(j) * norms(k)));
    }
  }
  report.is_orthogonal = report.max_cross <= tol;
  const double norm_dev = (norms.array() - 1.0).abs().maxCoeff();
  report.is_orthonormal = report.is_orthogonal && norm_dev <= tol;
  return report;
}

namespace {

void require_orthogonal(const VectorSystem& vs, double orth_tol) {
  const OrthReport report = check_orthogonal_system(vs, orth_tol);
  if (!report.is_orthogonal)
    throw Error(ErrorCode::NotOrthogonal,
                "max relative cross product " + std::to_string(report.max_cross) +
                    " exceeds tolerance");
}

// Columns of V scaled by 1 / (v_j* v_j).
Matrix inverse_gram_scaled(const Matrix& v) {
  const RealVector inv = v.colwise().squaredNorm().transpose().cwiseInverse();
  return v * inv.cast<Complex>().asDiagonal();
}

Matrix projector_unchecked(const Matrix& v) { return inverse_gram_scaled(v) * v.adjoint(); }

}  // namespace

Matrix orthogonal_projector(const VectorSystem& vs, double orth_tol) {
  require_orthogonal(vs, orth_tol);
  return projector_unchecked(vs.columns());
}

CyclicPair cyclic_operator(const VectorSystem& vs, double orth_tol) {
  require_orthogonal(vs, orth_tol);
  const Matrix& v = vs.columns();
  const Index n = vs.n();
  const Index m = vs.m();

  // Shifted copy: column j holds v_{j+1}, the last column wraps to v_1.
  Matrix shifted(n, m);
  for (Index j = 0; j < m; ++j) shifted.col(j) = v.col((j + 1) % m);

  CyclicPair cp;
  cp.n = n;
  cp.m = m;
  cp.P = projector_unchecked(v);
  const Matrix scaled = inverse_gram_scaled(v);
  cp.C = Matrix::Identity(n, n) - cp.P + shifted * scaled.adjoint();
  return cp;
}

double default_identity_tol(const CyclicPair& cp) {
  return 1e-10 * std::max(1.0, cp.C.norm());
}

LemmaReport verify_cyclic_identities(const CyclicPair& cp, const VectorSystem& vs, double tol) {
  if (cp.C.rows() != vs.n() || cp.C.cols() != vs.n() || cp.P.rows() != vs.n() ||
      cp.P.cols() != vs.n() || cp.m != vs.m())
    throw Error(ErrorCode::DimensionMismatch, "cyclic pair does not match the vector system");

  const Matrix& v = vs.columns();
  const Index n = vs.n();
  const Index m = vs.m();
  const Matrix identity = Matrix::Identity(n, n);

  LemmaReport report;
  for (Index j = 0; j < m; ++j) {
    report.cycle_residual =
        std::max(report.cycle_residual, (cp.C * v.col(j) - v.col((j + 1) % m)).norm());
    report.projection_residual =
        std::max(report.projection_residual, (cp.P * v.col(j) - v.col(j)).norm());
  }
  report.projection_residual = std::max(
      {report.projection_residual, (cp.P * cp.P - cp.P).norm(), (cp.P - cp.P.adjoint()).norm()});
  report.commute_residual = (cp.C * cp.P - cp.P * cp.C).norm();

  report.min_power_gap = std::numeric_limits<double>::infinity();
  Matrix power = cp.C;
  for (Index k = 1; k < m; ++k) {
    report.min_power_gap = std::min(report.min_power_gap, (power - identity).norm());
    power = power * cp.C;
  }
  report.minpoly_residual = (power - identity).norm();

  const OrthReport orth = check_orthogonal_system(vs, tol);
  if (orth.is_orthonormal) report.unitarity_residual = (cp.C.adjoint() * cp.C - identity).norm();

  report.pass = report.cycle_residual <= tol && report.projection_residual <= tol &&
                report.commute_residual <= tol && report.minpoly_residual <= tol &&
                report.unitarity_residual.value_or(0.0) <= tol && report.min_power_gap > tol;
  return report;
}

}  // namespace sclrom
