#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sclrom/ohf.hpp"

namespace sclrom {

/// T columns x_t = Q C_T^(t mod T) a, for a seeded orthonormal frame Q
/// (n x T) and a seeded coefficient vector a. `horizon` columns are emitted
/// (default T); x_{t+T} and x_t are bitwise equal. Throws DimensionTooSmall
/// when n < 2T.
SnapshotHistory gen_periodic_history(Index n, Index T, std::uint64_t seed,
                                     std::optional<Index> horizon = std::nullopt);

struct AlmostPeriodicHistory {
  SnapshotHistory noisy;  // clean + E
  SnapshotHistory clean;  // exactly T-periodic
};

/// Adds to each column of a periodic trajectory a seeded random vector
/// scaled to Euclidean norm eps_pert.
AlmostPeriodicHistory gen_almost_periodic_history(Index n, Index T, double eps_pert, Index horizon,
                                                  std::uint64_t seed);

struct WaveProfile {
  enum class Kind { sine_mode, gaussian };
  Kind kind = Kind::sine_mode;
  int mode = 1;          // sine_mode: sin(mode * pi * x / L)
  double center = 0.5;   // gaussian: exp(-((x - center) / width)^2)
  double width = 0.1;
  double amplitude = 1.0;

  static WaveProfile sine(int mode, double amplitude = 1.0);
  static WaveProfile gaussian(double center, double width, double amplitude = 1.0);
};

/// w_tt = c^2 w_xx on (0, L), w = 0 at both ends, w(x, 0) = profile,
/// w_t(x, 0) = 0.
struct WaveConfig {
  double L = 1.0;
  double c = 1.0;
  Index nx = 100;  // interior grid points, dx = L / (nx + 1)
  Index nt = 40;   // emitted steps; nt + 1 snapshots
  /// Defaults to one period of the profile's lowest mode spread over nt
  /// steps: 2L / (c * mode * nt), or 2L / (c * nt) for a gaussian.
  std::optional<double> dt;
  WaveProfile profile;
  /// Crank-Nicolson steps per emitted snapshot. When unset, the smallest
  /// count with c * (dt / substeps) / dx <= 2.
  std::optional<Index> substeps;

  double dx() const { return L / static_cast<double>(nx + 1); }
  double step() const;  // resolved dt
};

inline constexpr double kMaxCourant = 2.0;

struct WaveRun {
  SnapshotHistory displacement;  // nx x (nt + 1)
  SnapshotHistory velocity;      // nx x (nt + 1)
  std::vector<double> energy;    // per emitted snapshot
  Index substeps = 1;
};

/// Second-order central differences in space, Crank-Nicolson in time on the
/// first-order system (w, w_t). Throws ConfigInvalid.
WaveRun run_wave_1d(const WaveConfig& cfg);
SnapshotHistory simulate_wave_1d(const WaveConfig& cfg);

/// dx * (sum v_i^2 + c^2 sum_{i=0}^{nx} ((w_{i+1} - w_i) / dx)^2), with the
/// boundary values w_0 = w_{nx+1} = 0.
double wave_energy(const RealVector& w, const RealVector& v, double c, double dx);

}  // namespace sclrom
