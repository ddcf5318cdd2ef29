#include "sclrom/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sclrom {

CirculantElement SclRomModel::element(std::uint64_t t) const {
  const auto col = static_cast<Index>(t % static_cast<std::uint64_t>(period));
  return CirculantElement(coeffs.col(col));
}

ControlTuple SclRomModel::control(ManifoldTag tag) const {
  std::vector<CirculantElement> elements;
  elements.reserve(static_cast<std::size_t>(period));
  for (Index t = 0; t < period; ++t) elements.push_back(element(static_cast<std::uint64_t>(t)));
  return ControlTuple(ohf, std::move(elements), tag);
}

Vector least_squares_coeffs(const OhfFactorization& ohf, const Vector& target) {
  if (target.size() != ohf.n())
    throw Error(ErrorCode::DimensionMismatch, "least-squares target has wrong dimension");
  // V* Vhat = diag(s/s_1) W because the sine part is orthogonal to V.
  const RealVector ratio = ohf.singular_values / ohf.singular_values(0);
  const RealVector inv_ratio = ratio.cwiseInverse();
  const Matrix W = inv_ratio.cast<Complex>().asDiagonal() * (ohf.V.adjoint() * ohf.Vhat);
  const Vector projected = inv_ratio.cast<Complex>().asDiagonal() * (ohf.V.adjoint() * target);
  return (W.adjoint() * projected) / ohf.rho;
}

FitResult fit(const SnapshotHistory& h, const FitOptions& opts) {
  const Index period = opts.period.value_or(h.m());
  if (period < 1 || period > h.m())
    throw Error(ErrorCode::InsufficientData,
                "period " + std::to_string(period) + " needs that many snapshots, have " +
                    std::to_string(h.m()));
  Index m = opts.history_size.value_or(period);
  if (m < 1 || m > h.m())
    throw Error(ErrorCode::InsufficientData,
                "history size " + std::to_string(m) + " out of range for " +
                    std::to_string(h.m()) + " snapshots");
  if (h.n() < 2 * m && !opts.truncate_rank)
    throw Error(ErrorCode::DimensionTooSmall,
                "fit with m = " + std::to_string(m) + " needs n >= " + std::to_string(2 * m));

  if (opts.truncate_rank) {
    const Index rank = numerical_rank(svd_thin(h.leading(m)).S, opts.rank_tol);
    if (rank == 0) throw DegenerateHistoryError(0, m);
    m = rank;
  }

  SclRomModel model;
  model.ohf = build_ohf(h.leading(m), opts.rank_tol);
  model.period = period;
  model.epsilon_target = opts.epsilon;
  model.coeffs = Matrix::Zero(m, period);

  // Each column depends only on the read-only factors, so the order of
  // evaluation cannot change the result.
  const Complex scale = model.ohf.kappa / model.ohf.rho;
  for (Index t = 0; t < period; ++t) {
    if (opts.mode == FitMode::monomial) {
      model.coeffs.col(t) =
          monomial_element(m, static_cast<std::uint64_t>(t), scale).coeffs();
    } else {
      model.coeffs.col(t) = least_squares_coeffs(model.ohf, h.column(t));
    }
  }

  model.epsilon_achieved = training_residual(model, h);
  const bool met = model.epsilon_achieved <= opts.epsilon;
  return FitResult{std::move(model), met};
}

Matrix transition_matrix(const SclRomModel& model, std::uint64_t t) {
  const Matrix& vhat = model.ohf.Vhat;
  return vhat * model.element(t).to_matrix() * vhat.adjoint();
}

Vector predict(const SclRomModel& model, std::uint64_t t) {
  const OhfFactorization& ohf = model.ohf;
  const Vector input = ohf.T * ohf.anchor();
  const Vector reduced = ohf.Vhat.adjoint() * input;
  const Vector stepped = model.element(t).apply(reduced);
  return ohf.K * (ohf.Vhat * stepped);
}

double training_residual(const SclRomModel& model, const SnapshotHistory& h) {
  if (h.n() != model.n() || h.m() < model.period)
    throw Error(ErrorCode::DimensionMismatch, "history does not cover the model period");
  double worst = 0.0;
  for (Index t = 0; t < model.period; ++t) {
    worst = std::max(worst, (predict(model, static_cast<std::uint64_t>(t)) - h.column(t)).norm());
  }
  return worst;
}

MimeticReport verify_mimetic(const SclRomModel& model, const SnapshotHistory& h, double eps) {
  if (h.n() != model.n())
    throw Error(ErrorCode::DimensionMismatch,
                "snapshot dimension " + std::to_string(h.n()) + " differs from model dimension " +
                    std::to_string(model.n()));
  MimeticReport report;
  report.m = model.m();
  report.n = model.n();
  report.eps = eps;
  for (Index k = 1; k < h.m(); ++k) {
    const double r = (predict(model, static_cast<std::uint64_t>(k)) - h.column(k)).norm();
    report.per_step.push_back(r);
    report.max_residual = std::max(report.max_residual, r);
  }
  const double scale = h.max_column_norm();
  report.relative_residual = scale > 0.0 ? report.max_residual / scale : report.max_residual;
  report.pass = report.max_residual <= eps;
  return report;
}

PeriodReport detect_period(const SnapshotHistory& h, std::span<const Index> candidates, double tol) {
  if (candidates.empty()) throw Error(ErrorCode::InsufficientData, "no period candidates");
  const Index largest = *std::max_element(candidates.begin(), candidates.end());
  if (*std::min_element(candidates.begin(), candidates.end()) < 1)
    throw Error(ErrorCode::InsufficientData, "period candidates must be positive");
  if (h.m() < 2 * largest)
    throw Error(ErrorCode::InsufficientData,
                "need " + std::to_string(2 * largest) + " snapshots, have " + std::to_string(h.m()));

  const double scale = h.max_column_norm();
  PeriodReport report;
  report.candidates.assign(candidates.begin(), candidates.end());
  double best = std::numeric_limits<double>::infinity();
  for (const Index T : candidates) {
    double worst = 0.0;
    for (Index t = 0; t + T < h.m(); ++t)
      worst = std::max(worst, (h.column(t + T) - h.column(t)).norm());
    const double score = scale > 0.0 ? worst / scale : 0.0;
    report.scores.push_back(score);
    if (score < best || (score == best && T < report.best_T)) {
      best = score;
      report.best_T = T;
    }
  }
  report.within_tol = best <= tol;
  return report;
}

}  // namespace sclrom
