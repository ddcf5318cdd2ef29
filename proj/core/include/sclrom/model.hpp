#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sclrom/circulant.hpp"
#include "sclrom/ohf.hpp"

namespace sclrom {

enum class FitMode { monomial, least_squares };

struct FitOptions {
  FitMode mode = FitMode::monomial;
  double epsilon = 1e-10;  // target training residual
  double rank_tol = kDefaultRankTol;
  /// Shrink the history to its numerical rank (keeping the leading
  /// snapshots) instead of failing with DegenerateHistory.
  bool truncate_rank = false;
  /// Number of steps T to fit; defaults to every column of the history.
  std::optional<Index> period;
  /// Number of leading snapshots m used for the OHF; defaults to T.
  std::optional<Index> history_size;
};

/// Fitted switched closed-loop reduced model.
///
/// Step t is driven by H_t = Vhat circ(c_t) Vhat*, giving the prediction
/// x_t = K H_{t mod T} T x0 with x0 = ohf.anchor() (the first training
/// snapshot).
struct SclRomModel {
  OhfFactorization ohf;
  Matrix coeffs;  // m x T; column t is c_t
  Index period = 0;
  double epsilon_achieved = 0.0;
  double epsilon_target = 0.0;

  Index n() const noexcept { return ohf.n(); }
  Index m() const noexcept { return ohf.m(); }
  CirculantElement element(std::uint64_t t) const;
  /// The same control read as a ControlTuple (elements f_0..f_{T-1}).
  ControlTuple control(ManifoldTag tag = ManifoldTag::circle) const;
};

struct FitResult {
  SclRomModel model;
  bool target_met = false;
};

/// Throws DimensionTooSmall or DegenerateHistoryError.
FitResult fit(const SnapshotHistory& h, const FitOptions& opts = {});

/// Least-squares coefficients min_c |rho CH c - target| with CH = V diag(s/s_1) W,
/// solved through the stored SVD factors.
Vector least_squares_coeffs(const OhfFactorization& ohf, const Vector& target);

/// n x n matrix Vhat circ(c_{t mod T}) Vhat*.
Matrix transition_matrix(const SclRomModel& model, std::uint64_t t);

/// K H_{t mod T} T x0, evaluated as a chain of matrix-vector products.
Vector predict(const SclRomModel& model, std::uint64_t t);

/// max_t |predict(t) - v_{t+1}| over the first T columns of `h`.
double training_residual(const SclRomModel& model, const SnapshotHistory& h);

struct MimeticReport {
  double max_residual = 0.0;
  double relative_residual = 0.0;  // max_residual / max_k |v_k|
  std::vector<double> per_step;    // per_step[k-1] for k = 1..h.m()-1
  bool pass = false;
  Index m = 0;
  Index n = 0;
  double eps = 0.0;
};

/// max over k = 1..h.m()-1 of |predict(k) - v_{k+1}|, steps past T wrapping
/// periodically. Throws DimensionMismatch when the state sizes differ.
MimeticReport verify_mimetic(const SclRomModel& model, const SnapshotHistory& h, double eps);

struct PeriodReport {
  Index best_T = 0;
  std::vector<Index> candidates;
  std::vector<double> scores;  // max_t |v_{t+T} - v_t| / max_t |v_t|
  bool within_tol = false;
};

/// Throws InsufficientData unless h has at least 2 * max(candidates) columns.
PeriodReport detect_period(const SnapshotHistory& h, std::span<const Index> candidates, double tol);

}  // namespace sclrom
