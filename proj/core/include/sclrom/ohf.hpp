#pragma once

#include <optional>

#include "sclrom/types.hpp"

namespace sclrom {

inline constexpr double kDefaultRankTol = 1e-12;

/// State snapshots v_1..v_m stored as the columns of an n x m matrix.
///
/// Zero columns are representable (a simulator may legitimately emit them);
/// build_ohf rejects them as a degenerate history.
class SnapshotHistory {
 public:
  explicit SnapshotHistory(Matrix data, std::optional<double> dt = std::nullopt);

  Index n() const noexcept { return data_.rows(); }
  Index m() const noexcept { return data_.cols(); }
  const Matrix& data() const noexcept { return data_; }
  auto column(Index j) const { return data_.col(j); }
  std::optional<double> dt() const noexcept { return dt_; }

  /// True when every imaginary part is +0.0 bit for bit.
  bool is_real() const noexcept;
  /// The first `count` snapshots.
  SnapshotHistory leading(Index count) const;
  /// Largest column norm.
  double max_column_norm() const;

 private:
  Matrix data_;
  std::optional<double> dt_;
};

/// Thin SVD written as H = V * diag(S) * W, so W is the adjoint of the usual
/// right factor. Each column of V has its first largest-magnitude entry real
/// and positive; the matching row of W absorbs the conjugate phase.
struct SvdTriple {
  Matrix V;      // n x m
  RealVector S;  // nonincreasing
  Matrix W;      // m x m unitary
};

/// Throws NumericalFailure if the decomposition does not converge.
SvdTriple svd_thin(const SnapshotHistory& h);

/// m orthonormal columns spanning part of the orthogonal complement of the
/// orthonormal columns of V (n x m, 2m <= n).
///
/// Gram-Schmidt runs over the canonical basis e_1, e_2, ... in order,
/// projecting out span(V) and the columns already accepted (two passes); a
/// candidate whose residual norm falls below 1e-8 is skipped. The result is a
/// deterministic function of V. Throws DimensionTooSmall when n < 2m.
Matrix complement_basis(const Matrix& V);

/// Orthonormal history factor of a snapshot history together with the
/// projections and circular shift factor it determines.
///
///   Vhat  = V diag(s/s_1) W + U diag(t) W     (orthonormal columns)
///   kappa = s_1,  rho = v_1* v_1 / s_1
///   K = V V*,  T = vhat_1 vhat_1*,  U_csf = cyclic operator of Vhat
///
/// and it satisfies T v_1 = rho vhat_1, U_csf vhat_j = vhat_{j+1 mod m},
/// K kappa vhat_j = v_j.
struct OhfFactorization {
  Matrix V;
  Matrix Vhat;
  Complex kappa;
  Complex rho;
  Matrix K;
  Matrix T;
  Matrix U_csf;
  RealVector singular_values;
  RealVector t_values;  // sqrt(1 - (s_j/s_1)^2)

  Index n() const noexcept { return Vhat.rows(); }
  Index m() const noexcept { return Vhat.cols(); }
  auto vhat(Index j) const { return Vhat.col(j); }

  /// kappa K vhat_1, which equals v_1. Models use it as the fixed input
  /// state so prediction depends only on stored factors.
  Vector anchor() const;
};

/// Builds K, T and U_csf from the stored factors. t_values are derived from
/// singular_values.
OhfFactorization assemble_ohf(Matrix V, Matrix Vhat, Complex kappa, Complex rho,
                              RealVector singular_values);

/// Throws DimensionTooSmall (n < 2m) or DegenerateHistoryError
/// (s_m <= rank_tol * s_1, or a zero column).
OhfFactorization build_ohf(const SnapshotHistory& h, double rank_tol = kDefaultRankTol);

/// Numerical rank: count of s_j > rank_tol * s_1.
Index numerical_rank(const RealVector& singular_values, double rank_tol);

struct OhfReport {
  double t_residual = 0.0;        // |T v_1 - rho vhat_1|
  double shift_residual = 0.0;    // max_j |U vhat_j - vhat_{j+1 mod m}|
  double k_residual = 0.0;        // max_j |K kappa vhat_j - v_j| / |v_j|
  double unitary_residual = 0.0;  // |U*U - 1|_F
  bool pass = false;
};

/// Checks the OHF against the leading m columns of `h`.
OhfReport verify_ohf(const OhfFactorization& ohf, const SnapshotHistory& h, double tol);

}  // namespace sclrom
