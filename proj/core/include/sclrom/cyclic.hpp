#pragma once

#include <optional>
#include <span>

#include "sclrom/types.hpp"

namespace sclrom {

/// Relative cross-product tolerance used when an operation requires an
/// orthogonal system as a precondition.
inline constexpr double kDefaultOrthTol = 1e-10;

/// An ordered list of m nonzero vectors in C^n, stored as the columns of an
/// n x m matrix, with m <= n.
class VectorSystem {
 public:
  /// Throws EmptySystem, ZeroVectorError, or DimensionMismatch (m > n).
  explicit VectorSystem(Matrix columns);
  static VectorSystem from_vectors(std::span<const Vector> vectors);

  Index n() const noexcept { return columns_.rows(); }
  Index m() const noexcept { return columns_.cols(); }
  const Matrix& columns() const noexcept { return columns_; }
  auto vector(Index j) const { return columns_.col(j); }

 private:
  Matrix columns_;
};

struct OrthReport {
  bool is_orthogonal = false;
  bool is_orthonormal = false;
  double max_cross = 0.0;  // max_{j != k} |v_j* v_k| / (|v_j| |v_k|)
  double min_norm = 0.0;
};

OrthReport check_orthogonal_system(const VectorSystem& vs, double tol);

/// P = sum_j v_j v_j* / (v_j* v_j): the orthogonal projection onto the span
/// of an orthogonal system. Throws NotOrthogonal.
Matrix orthogonal_projector(const VectorSystem& vs, double orth_tol = kDefaultOrthTol);

/// The cyclic operator C of an orthogonal system together with its
/// projection P. C sends v_j to v_{j+1}, v_m back to v_1, and fixes the
/// orthogonal complement of the span pointwise.
struct CyclicPair {
  Matrix C;
  Matrix P;
  Index m = 0;
  Index n = 0;
};

CyclicPair cyclic_operator(const VectorSystem& vs, double orth_tol = kDefaultOrthTol);

/// Residuals of the algebraic identities a cyclic pair must satisfy. All
/// matrix residuals are Frobenius norms.
struct LemmaReport {
  double cycle_residual = 0.0;       // max_j |C v_j - v_{j+1 mod m}|
  double projection_residual = 0.0; // max(|P v_j - v_j|, |P^2 - P|, |P - P*|)
  double commute_residual = 0.0;     // |CP - PC|
  double minpoly_residual = 0.0;     // |C^m - 1|
  std::optional<double> unitarity_residual;  // |C*C - 1|, orthonormal input only
  /// min_{1<=k<m} |C^k - 1|; +inf when m == 1 (no proper powers).
  double min_power_gap = 0.0;
  bool pass = false;
};

/// Checks the cyclic, projection, commutation, minimal-polynomial and (for
/// orthonormal input) unitarity identities. Powers of C are formed by
/// repeated multiplication. `pass` also requires min_power_gap > tol.
LemmaReport verify_cyclic_identities(const CyclicPair& cp, const VectorSystem& vs, double tol);

/// 1e-10 * max(1, |C|_F).
double default_identity_tol(const CyclicPair& cp);

}  // namespace sclrom
