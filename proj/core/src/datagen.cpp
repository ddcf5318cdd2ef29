#include "sclrom/datagen.hpp"

#include <cmath>
#include <numbers>

#include "sclrom/random.hpp"

namespace sclrom {

namespace {

// Independent streams derived from one user seed.
constexpr std::uint64_t kCoeffStream = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kNoiseStream = 0xD1B54A32D192ED03ULL;

}  // namespace

SnapshotHistory gen_periodic_history(Index n, Index T, std::uint64_t seed,
                                     std::optional<Index> horizon) {
  if (T < 1) throw Error(ErrorCode::DimensionTooSmall, "period must be positive");
  if (n < 2 * T)
    throw Error(ErrorCode::DimensionTooSmall,
                "periodic history with T = " + std::to_string(T) + " needs n >= " +
                    std::to_string(2 * T));
  const Index columns = horizon.value_or(T);
  if (columns < 1) throw Error(ErrorCode::DimensionTooSmall, "horizon must be positive");

  const Matrix frame = random_orthonormal_frame(n, T, seed);
  GaussianSource source(seed ^ kCoeffStream);
  const Vector start = source.complex_vector(T);

  Matrix data(n, columns);
  Vector rotated(T);
  for (Index t = 0; t < columns; ++t) {
    const Index shift = t % T;
    for (Index i = 0; i < T; ++i) rotated(i) = start((i - shift + T) % T);
    data.col(t) = frame * rotated;
  }
  return SnapshotHistory(std::move(data));
}

AlmostPeriodicHistory gen_almost_periodic_history(Index n, Index T, double eps_pert, Index horizon,
                                                  std::uint64_t seed) {
  if (horizon < T) throw Error(ErrorCode::DimensionTooSmall, "horizon must cover one period");
  if (!(eps_pert >= 0.0)) throw Error(ErrorCode::ConfigInvalid, "eps_pert must be nonnegative");
  SnapshotHistory clean = gen_periodic_history(n, T, seed, horizon);
  if (eps_pert == 0.0) return {clean, clean};

  GaussianSource source(seed ^ kNoiseStream);
  Matrix noisy = clean.data();
  for (Index t = 0; t < horizon; ++t) {
    Vector e = source.complex_vector(n);
    e *= eps_pert / e.norm();
    noisy.col(t) += e;
  }
  return {SnapshotHistory(std::move(noisy)), std::move(clean)};
}

WaveProfile WaveProfile::sine(int mode, double amplitude) {
  WaveProfile p;
  p.kind = Kind::sine_mode;
  p.mode = mode;
  p.amplitude = amplitude;
  return p;
}

WaveProfile WaveProfile::gaussian(double center, double width, double amplitude) {
  WaveProfile p;
  p.kind = Kind::gaussian;
  p.center = center;
  p.width = width;
  p.amplitude = amplitude;
  return p;
}

double WaveConfig::step() const {
  if (dt) return *dt;
  const double modes = profile.kind == WaveProfile::Kind::sine_mode ? profile.mode : 1.0;
  return 2.0 * L / (c * modes * static_cast<double>(nt));
}

double wave_energy(const RealVector& w, const RealVector& v, double c, double dx) {
  const Index nx = w.size();
  double grad = 0.0;
  for (Index i = 0; i <= nx; ++i) {
    const double left = i == 0 ? 0.0 : w(i - 1);
    const double right = i == nx ? 0.0 : w(i);
    const double d = (right - left) / dx;
    grad += d * d;
  }
  return dx * (v.squaredNorm() + c * c * grad);
}

WaveRun run_wave_1d(const WaveConfig& cfg) {
  if (!(cfg.L > 0.0) || !(cfg.c > 0.0))
    throw Error(ErrorCode::ConfigInvalid, "L and c must be positive");
  if (cfg.nx < 3) throw Error(ErrorCode::ConfigInvalid, "nx must be >= 3");
  if (cfg.nt < 1) throw Error(ErrorCode::ConfigInvalid, "nt must be >= 1");
  if (cfg.profile.kind == WaveProfile::Kind::sine_mode && cfg.profile.mode < 1)
    throw Error(ErrorCode::ConfigInvalid, "sine mode must be >= 1");
  if (cfg.profile.kind == WaveProfile::Kind::gaussian && !(cfg.profile.width > 0.0))
    throw Error(ErrorCode::ConfigInvalid, "gaussian width must be positive");
  const double dt = cfg.step();
  if (!(dt > 0.0)) throw Error(ErrorCode::ConfigInvalid, "dt must be positive");

  const double dx = cfg.dx();
  const double courant = cfg.c * dt / dx;
  Index substeps = 0;
  if (cfg.substeps) {
    substeps = *cfg.substeps;
    if (substeps < 1) throw Error(ErrorCode::ConfigInvalid, "substeps must be >= 1");
    if (courant / static_cast<double>(substeps) > kMaxCourant)
      throw Error(ErrorCode::ConfigInvalid,
                  "Courant number " + std::to_string(courant / static_cast<double>(substeps)) +
                      " exceeds " + std::to_string(kMaxCourant));
  } else {
    substeps = std::max<Index>(1, static_cast<Index>(std::ceil(courant / kMaxCourant)));
  }

  const Index nx = cfg.nx;
  const double h = dt / static_cast<double>(substeps);
  RealVector w(nx);
  for (Index i = 0; i < nx; ++i) {
    const double x = dx * static_cast<double>(i + 1);
    const WaveProfile& p = cfg.profile;
    if (p.kind == WaveProfile::Kind::sine_mode) {
      w(i) = p.amplitude * std::sin(p.mode * std::numbers::pi * x / cfg.L);
    } else {
      const double z = (x - p.center) / p.width;
      w(i) = p.amplitude * std::exp(-z * z);
    }
  }
  RealVector v = RealVector::Zero(nx);

  // (I - a D2) v' = (I + a D2) v + h c^2 D2 w,  a = c^2 h^2 / 4,
  // w' = w + h/2 (v + v'). D2 is the Dirichlet second difference.
  const double c2 = cfg.c * cfg.c;
  const double a = c2 * h * h / 4.0;
  const double off = -a / (dx * dx);
  const double diag = 1.0 + 2.0 * a / (dx * dx);

  // Thomas factorisation of the constant tridiagonal system.
  RealVector upper(nx), pivot(nx);
  pivot(0) = diag;
  upper(0) = off / pivot(0);
  for (Index i = 1; i < nx; ++i) {
    pivot(i) = diag - off * upper(i - 1);
    upper(i) = off / pivot(i);
  }
  auto second_diff = [nx, dx](const RealVector& u, RealVector& out) {
    for (Index i = 0; i < nx; ++i) {
      const double left = i == 0 ? 0.0 : u(i - 1);
      const double right = i + 1 == nx ? 0.0 : u(i + 1);
      out(i) = (left - 2.0 * u(i) + right) / (dx * dx);
    }
  };

  Eigen::MatrixXd disp(nx, cfg.nt + 1), vel(nx, cfg.nt + 1);
  std::vector<double> energy;
  energy.reserve(static_cast<std::size_t>(cfg.nt + 1));
  disp.col(0) = w;
  vel.col(0) = v;
  energy.push_back(wave_energy(w, v, cfg.c, dx));

  RealVector lap_w(nx), lap_v(nx), rhs(nx), v_next(nx);
  for (Index step = 1; step <= cfg.nt; ++step) {
    for (Index s = 0; s < substeps; ++s) {
      second_diff(w, lap_w);
      second_diff(v, lap_v);
      rhs = v + a * lap_v + h * c2 * lap_w;
      // forward sweep then back substitution
      v_next(0) = rhs(0) / pivot(0);
      for (Index i = 1; i < nx; ++i) v_next(i) = (rhs(i) - off * v_next(i - 1)) / pivot(i);
      for (Index i = nx - 2; i >= 0; --i) v_next(i) -= upper(i) * v_next(i + 1);
      w += 0.5 * h * (v + v_next);
      v = v_next;
    }
    disp.col(step) = w;
    vel.col(step) = v;
    energy.push_back(wave_energy(w, v, cfg.c, dx));
  }

  return WaveRun{SnapshotHistory(disp.cast<Complex>(), dt), SnapshotHistory(vel.cast<Complex>(), dt),
                 std::move(energy), substeps};
}

SnapshotHistory simulate_wave_1d(const WaveConfig& cfg) { return run_wave_1d(cfg).displacement; }

}  // namespace sclrom
