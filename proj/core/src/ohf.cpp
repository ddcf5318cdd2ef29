#include "sclrom/ohf.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>

#include "sclrom/cyclic.hpp"
#include "sclrom/random.hpp"

namespace sclrom {

SnapshotHistory::SnapshotHistory(Matrix data, std::optional<double> dt)
    : data_(std::move(data)), dt_(dt) {
  if (data_.rows() < 1 || data_.cols() < 1)
    throw Error(ErrorCode::DimensionMismatch, "snapshot history needs n >= 1 and m >= 1");
}

bool SnapshotHistory::is_real() const noexcept {
  for (Index j = 0; j < data_.cols(); ++j) {
    for (Index i = 0; i < data_.rows(); ++i) {
      if (std::bit_cast<std::uint64_t>(data_(i, j).imag()) != 0) return false;
    }
  }
  return true;
}

SnapshotHistory SnapshotHistory::leading(Index count) const {
  if (count < 1 || count > m())
    throw Error(ErrorCode::DimensionMismatch,
                "requested " + std::to_string(count) + " of " + std::to_string(m()) + " snapshots");
  return SnapshotHistory(data_.leftCols(count), dt_);
}

double SnapshotHistory::max_column_norm() const { return data_.colwise().norm().maxCoeff(); }

SvdTriple svd_thin(const SnapshotHistory& h) {
  Eigen::JacobiSVD<Matrix> svd(h.data(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success)
    throw Error(ErrorCode::NumericalFailure, "SVD did not converge");

  SvdTriple out{svd.matrixU(), svd.singularValues(), svd.matrixV().adjoint()};
  const Vector phases = normalize_column_phases(out.V);
  for (Index j = 0; j < phases.size(); ++j) out.W.row(j) *= std::conj(phases(j));
  return out;
}

Matrix complement_basis(const Matrix& V) {
  const Index n = V.rows();
  const Index m = V.cols();
  if (n < 2 * m)
    throw Error(ErrorCode::DimensionTooSmall,
                "complement of " + std::to_string(m) + " columns needs n >= " +
                    std::to_string(2 * m) + ", got n = " + std::to_string(n));

  constexpr double kSkipBelow = 1e-8;
  Matrix out(n, m);
  Index accepted = 0;
  for (Index k = 0; k < n && accepted < m; ++k) {
    Vector x = Vector::Unit(n, k);
    for (int pass = 0; pass < 2; ++pass) {
      x -= V * (V.adjoint() * x);
      if (accepted > 0) {
        const auto done = out.leftCols(accepted);
        x -= done * (done.adjoint() * x);
      }
    }
    const double norm = x.norm();
    if (norm < kSkipBelow) continue;
    out.col(accepted++) = x / norm;
  }
  if (accepted < m) throw Error(ErrorCode::NumericalFailure, "complement basis ran out of candidates");
  return out;
}

Vector OhfFactorization::anchor() const { return kappa * (K * Vhat.col(0)); }

OhfFactorization assemble_ohf(Matrix V, Matrix Vhat, Complex kappa, Complex rho,
                              RealVector singular_values) {
  OhfFactorization ohf;
  ohf.K = V * V.adjoint();
  ohf.T = Vhat.col(0) * Vhat.col(0).adjoint();
  ohf.U_csf = cyclic_operator(VectorSystem(Vhat)).C;
  ohf.V = std::move(V);
  ohf.Vhat = std::move(Vhat);
  ohf.kappa = kappa;
  ohf.rho = rho;

  ohf.t_values.resize(singular_values.size());
  const double s1 = singular_values.size() > 0 ? singular_values(0) : 1.0;
  for (Index j = 0; j < singular_values.size(); ++j) {
    const double r = std::min(1.0, singular_values(j) / s1);
    // (1 - r)(1 + r) keeps precision when r is close to 1.
    ohf.t_values(j) = std::sqrt(std::max(0.0, (1.0 - r) * (1.0 + r)));
  }
  ohf.singular_values = std::move(singular_values);
  return ohf;
}

Index numerical_rank(const RealVector& singular_values, double rank_tol) {
  if (singular_values.size() == 0 || !(singular_values(0) > 0.0)) return 0;
  const double cutoff = rank_tol * singular_values(0);
  Index rank = 0;
  for (Index j = 0; j < singular_values.size(); ++j) {
    if (singular_values(j) > cutoff) ++rank;
  }
  return rank;
}

OhfFactorization build_ohf(const SnapshotHistory& h, double rank_tol) {
  const Index n = h.n();
  const Index m = h.m();
  if (n < 2 * m)
    throw Error(ErrorCode::DimensionTooSmall,
                "OHF of " + std::to_string(m) + " snapshots needs n >= " + std::to_string(2 * m) +
                    ", got n = " + std::to_string(n));

  const SvdTriple svd = svd_thin(h);
  const Index rank = numerical_rank(svd.S, rank_tol);
  bool zero_column = false;
  for (Index j = 0; j < m; ++j) zero_column = zero_column || h.column(j).squaredNorm() == 0.0;
  if (rank < m || zero_column) throw DegenerateHistoryError(std::min(rank, m - 1), m);

  const double s1 = svd.S(0);
  RealVector ratio = svd.S / s1;
  RealVector t(m);
  for (Index j = 0; j < m; ++j) {
    const double r = std::min(1.0, ratio(j));
    ratio(j) = r;
    t(j) = std::sqrt(std::max(0.0, (1.0 - r) * (1.0 + r)));
  }

  const Matrix U = complement_basis(svd.V);
  const Matrix cos_part = svd.V * ratio.cast<Complex>().asDiagonal() * svd.W;
  const Matrix sin_part = U * t.cast<Complex>().asDiagonal() * svd.W;
  Matrix Vhat = cos_part + sin_part;

  const Complex rho(h.column(0).squaredNorm() / s1, 0.0);
  const Complex overlap = Vhat.col(0).dot(h.column(0));
  if (std::abs(overlap - rho) > 1e-10 * std::abs(rho))
    throw Error(ErrorCode::InvariantViolation,
                "vhat_1* v_1 disagrees with rho = v_1* v_1 / s_1 (internal consistency)");

  return assemble_ohf(svd.V, std::move(Vhat), Complex(s1, 0.0), rho, svd.S);
}

OhfReport verify_ohf(const OhfFactorization& ohf, const SnapshotHistory& h, double tol) {
  const Index n = ohf.n();
  const Index m = ohf.m();
  if (h.n() != n || h.m() < m || ohf.K.rows() != n || ohf.T.rows() != n || ohf.U_csf.rows() != n)
    throw Error(ErrorCode::DimensionMismatch, "OHF does not match the snapshot history");

  OhfReport report;
  report.t_residual = (ohf.T * h.column(0) - ohf.rho * ohf.Vhat.col(0)).norm();
  for (Index j = 0; j < m; ++j) {
    report.shift_residual = std::max(
        report.shift_residual, (ohf.U_csf * ohf.Vhat.col(j) - ohf.Vhat.col((j + 1) % m)).norm());
    const double vnorm = h.column(j).norm();
    const double err = (ohf.kappa * (ohf.K * ohf.Vhat.col(j)) - h.column(j)).norm();
    report.k_residual = std::max(report.k_residual, vnorm > 0.0 ? err / vnorm : err);
  }
  report.unitary_residual = (ohf.U_csf.adjoint() * ohf.U_csf - Matrix::Identity(n, n)).norm();
  report.pass = report.t_residual <= tol && report.shift_residual <= tol &&
                report.k_residual <= tol && report.unitary_residual <= tol;
  return report;
}

}  // namespace sclrom
