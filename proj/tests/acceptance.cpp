// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "sclrom/circulant.hpp"
#include "sclrom/cli.hpp"
#include "sclrom/cyclic.hpp"
#include "sclrom/datagen.hpp"
#include "sclrom/io.hpp"
#include "sclrom/model.hpp"
#include "sclrom/random.hpp"
#include "support.hpp"

using namespace sclrom;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

// Criterion 1: cyclic operator identities on random orthonormal systems.
Outcome cyclic_suite() {
  const auto start = Clock::now();
  Outcome o;
  double worst = 0.0;
  double gap = std::numeric_limits<double>::infinity();
  int failures = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Index m = 1 + static_cast<Index>(seed % 16);
    const Index n = m + static_cast<Index>((seed * 7919) % static_cast<std::uint64_t>(65 - m));
    const VectorSystem vs(random_orthonormal_frame(n, m, seed));
    const CyclicPair cp = cyclic_operator(vs);
    const LemmaReport r = verify_cyclic_identities(cp, vs, 1e-10);
    worst = std::max({worst, r.cycle_residual, r.projection_residual, r.commute_residual,
                      r.minpoly_residual, r.unitarity_residual.value_or(0.0)});
    if (m > 1) gap = std::min(gap, r.min_power_gap);
    if (!r.pass || (m > 1 && !(r.min_power_gap > 0.1))) ++failures;
  }
  const double elapsed = seconds_since(start);
  o.pass = failures == 0 && elapsed < 10.0;
  o.detail = "200 systems, " + std::to_string(failures) + " failing, worst residual " + sci(worst) +
             " (tol 1e-10), min power gap " + sci(gap) + " (> 0.1), " + fixed(elapsed) + " s (< 10 s)";
  return o;
}

// Criterion 2: OHF residuals on random histories.
Outcome ohf_suite() {
  const auto start = Clock::now();
  Outcome o;
  double worst = 0.0;
  double worst_orth = 0.0;
  int failures = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Index m = 1 + static_cast<Index>(seed % 32);
    const Index n = 2 * m + static_cast<Index>((seed * 104729) % static_cast<std::uint64_t>(129 - 2 * m));
    GaussianSource rng(seed + 1000);
    const SnapshotHistory h(rng.complex_matrix(n, m));
    const OhfFactorization f = build_ohf(h);
    const OhfReport r = verify_ohf(f, h, 1e-10);
    const double orth = test::max_abs(f.Vhat.adjoint() * f.Vhat - Matrix::Identity(m, m));
    const bool rho_ok = f.rho.real() > 0.0 && std::abs(f.rho.imag()) <= 1e-10 * std::abs(f.rho);
    worst = std::max({worst, r.t_residual, r.shift_residual, r.k_residual, r.unitary_residual});
    worst_orth = std::max(worst_orth, orth / static_cast<double>(m));
    if (!r.pass || !rho_ok || orth > 1e-12 * static_cast<double>(m)) ++failures;
  }
  const double elapsed = seconds_since(start);
  o.pass = failures == 0 && elapsed < 20.0;
  o.detail = "100 histories, " + std::to_string(failures) + " failing, worst residual " + sci(worst) +
             " (tol 1e-10), worst |Vhat*Vhat - 1|/m " + sci(worst_orth) + " (tol 1e-12), " + fixed(elapsed) +
             " s (< 20 s)";
  return o;
}

// Criterion 3: commuting diagram for degrees 0..2m.
Outcome diagram_suite() {
  Outcome o;
  double worst = 0.0;
  int failures = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Index m = 1 + static_cast<Index>(seed % 8);
    const Index n = 2 * m + static_cast<Index>(seed % 11);
    GaussianSource rng(seed + 5000);
    const OhfFactorization f = build_ohf(SnapshotHistory(rng.complex_matrix(n, m)));
    std::vector<Index> degrees;
    for (Index d = 0; d <= 2 * m; ++d) degrees.push_back(d);
    const DiagramReport r = check_diagram(f, degrees, 1e-10, seed);
    worst = std::max(worst, r.max_residual);
    if (!r.pass || r.max_residual > 1e-10) ++failures;
  }
  o.pass = failures == 0;
  o.detail = "50 factorizations, " + std::to_string(failures) + " failing, max residual " + sci(worst) +
             " (tol 1e-10)";
  return o;
}

// Criterion 4: exact reproduction of periodic data.
Outcome periodic_reproduction() {
  Outcome o;
  const SnapshotHistory h = gen_periodic_history(64, 8, 1);
  FitOptions opts;
  opts.mode = FitMode::monomial;
  opts.epsilon = 1e-10;
  const FitResult r = fit(h, opts);
  const MimeticReport rep = verify_mimetic(r.model, h, 1e-10);
  o.pass = rep.pass && rep.max_residual <= 1e-10 && r.model.epsilon_achieved <= 1e-10;
  o.detail = "n = 64, T = 8, max residual " + sci(rep.max_residual) + ", training residual " +
             sci(r.model.epsilon_achieved) + " (tol 1e-10)";
  return o;
}

// Criterion 5: prediction error on almost-periodic data.
Outcome almost_periodic_bound() {
  Outcome o;
  std::string detail;
  for (const double eps : {1e-2, 1e-4, 1e-6}) {
    double worst_ratio = 0.0;
    int failures = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const Index T = 8;
      const AlmostPeriodicHistory d = gen_almost_periodic_history(64, T, eps, 2 * T, seed);
      FitOptions opts;
      opts.mode = FitMode::least_squares;
      const FitResult r = fit(d.noisy.leading(T), opts);
      double worst = 0.0;
      for (Index t = T; t < 2 * T; ++t)
        worst = std::max(worst, (predict(r.model, static_cast<std::uint64_t>(t)) - d.noisy.column(t)).norm());
      const double bound = 2.0 * eps + 1e-10;
      worst_ratio = std::max(worst_ratio, worst / bound);
      if (worst > bound) ++failures;
    }
    if (failures > 0) o.pass = false;
    detail += (detail.empty() ? "" : ", ") + std::string("eps ") + sci(eps) + ": worst/bound " +
              fixed(worst_ratio);
  }
  o.detail = "20 seeds each, " + detail + " (bound 2 eps + 1e-10)";
  return o;
}

// Criterion 6: wave equation pipeline.
Outcome wave_pipeline() {
  const auto start = Clock::now();
  Outcome o;
  WaveConfig cfg;
  cfg.nx = 100;
  cfg.nt = 40;
  cfg.profile = WaveProfile::sine(1);
  const WaveRun run = run_wave_1d(cfg);
  FitOptions opts;
  opts.mode = FitMode::least_squares;
  opts.truncate_rank = true;
  const FitResult r = fit(run.displacement, opts);
  const double scale = run.displacement.max_column_norm();
  const MimeticReport rep = verify_mimetic(r.model, run.displacement, 1e-8 * scale);
  const double e0 = run.energy.front();
  double drift = 0.0;
  for (const double e : run.energy) drift = std::max(drift, std::abs(e - e0) / e0);
  const double elapsed = seconds_since(start);
  o.pass = rep.relative_residual <= 1e-8 && drift <= 1e-10 && elapsed < 30.0;
  o.detail = "nx = 100, nt = 40, m = " + std::to_string(r.model.m()) + ", relative residual " +
             sci(rep.relative_residual) + " (tol 1e-8), energy drift " + sci(drift) + " (tol 1e-10), " +
             fixed(elapsed) + " s (< 30 s)";
  return o;
}

// Criterion 7: least-squares coefficients against a dense normal-equations solve.
Outcome least_squares_oracle() {
  Outcome o;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Index m = 1 + static_cast<Index>(seed % 8);
    const Index T = 2 * m;
    const Index n = 2 * m + static_cast<Index>(seed % 5);
    GaussianSource rng(seed + 9000);
    const SnapshotHistory h(rng.complex_matrix(n, T));
    FitOptions opts;
    opts.mode = FitMode::least_squares;
    opts.history_size = m;
    const FitResult r = fit(h, opts);

    // Scalars from an independent eigen-solve of H*H.
    const Matrix hm = h.leading(m).data();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(hm.adjoint() * hm);
    const double s1 = std::sqrt(eig.eigenvalues().maxCoeff());
    const double rho = hm.col(0).squaredNorm() / s1;
    const Matrix a = rho * hm / s1;
    for (Index t = 0; t < T; ++t) {
      const Vector c = test::normal_equations(a, h.column(t));
      worst = std::max(worst, (r.model.coeffs.col(t) - c).norm() / c.norm());
    }
  }
  o.pass = worst <= 1e-8;
  o.detail = "20 instances, m <= 8, T = 2m, worst relative deviation " + sci(worst) + " (tol 1e-8)";
  return o;
}

template <class F>
bool raises(ErrorCode code, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

// Criterion 8: persistence.
Outcome persistence() {
  Outcome o;
  const fs::path dir = fs::current_path() / "acceptance_scratch";
  fs::create_directories(dir);
  int bad_roundtrips = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SnapshotHistory h = gen_periodic_history(64, 8, seed);
    write_snapshots(h, dir / "h.bin", SnapshotFormat::binary);
    if (!test::bitwise_equal(read_snapshots(dir / "h.bin").data(), h.data())) ++bad_roundtrips;
    write_snapshots(h, dir / "h.csv", SnapshotFormat::csv);
    if (!test::bitwise_equal(read_snapshots(dir / "h.csv").data(), h.data())) ++bad_roundtrips;
  }

  const SnapshotHistory h = gen_periodic_history(64, 8, 1);
  const SclRomModel model = fit(h).model;
  write_model(model, dir / "m.model");
  const SclRomModel loaded = read_model(dir / "m.model");
  int bad_predictions = 0;
  for (std::uint64_t t = 0; t < 8; ++t)
    if (!test::bitwise_equal(predict(loaded, t), predict(model, t))) ++bad_predictions;
  if (!test::bitwise_equal(loaded.coeffs, model.coeffs)) ++bad_predictions;

  std::ostringstream buf;
  write_model(model, buf);
  const std::string bytes = buf.str();
  int missed = 0;
  const auto expect_invariant = [&](std::string text) {
    std::istringstream in(text);
    if (!raises(ErrorCode::InvariantViolation, [&] { read_model(in); })) ++missed;
  };
  std::string bad_m = bytes;
  bad_m.replace(bad_m.find("\nm: 8\n"), 6, "\nm: 7\n");
  expect_invariant(bad_m);
  std::string bad_t = bytes;
  bad_t.replace(bad_t.find("\nT: 8\n"), 6, "\nT: 5\n");
  expect_invariant(bad_t);
  SclRomModel tampered = model;
  tampered.ohf.rho *= 2.0;
  std::ostringstream tbuf;
  write_model(tampered, tbuf);
  expect_invariant(tbuf.str());

  o.pass = bad_roundtrips == 0 && bad_predictions == 0 && missed == 0;
  o.detail = "20 snapshot roundtrips (" + std::to_string(bad_roundtrips) + " differ), model predictions " +
             (bad_predictions == 0 ? "bitwise identical" : "differ") + ", " + std::to_string(3 - missed) +
             "/3 corrupted manifests rejected";
  return o;
}

std::string cli_transcript(const fs::path& dir) {
  const std::string h = (dir / "h.bin").string();
  const std::string m = (dir / "m.bin").string();
  const std::vector<std::vector<std::string>> commands = {
      {"simulate", "periodic", "--n", "64", "--T", "8", "--seed", "1", "--out", h},
      {"fit", h, "--mode", "monomial", "--eps", "1e-10", "--out", m},
      {"verify", m, h},
  };
  std::ostringstream out, err;
  for (const auto& cmd : commands) {
    std::vector<const char*> argv{"sclrom"};
    for (const auto& a : cmd) argv.push_back(a.c_str());
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    out << "[exit " << code << "]\n";
  }
  return out.str();
}

// Criterion 9: CLI output is deterministic.
Outcome cli_determinism() {
  Outcome o;
  const fs::path dir = fs::current_path() / "acceptance_scratch";
  fs::create_directories(dir);
  const std::string first = cli_transcript(dir);
  const std::string second = cli_transcript(dir);
  const bool all_ok = first.find("[exit 1]") == std::string::npos && first.find("[exit 2]") == std::string::npos;
  o.pass = first == second && all_ok;
  o.detail = std::string("simulate/fit/verify twice, stdout ") + (first == second ? "byte-identical" : "differs") +
             " (" + std::to_string(first.size()) + " bytes), exit codes " + (all_ok ? "all 0" : "nonzero");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"cyclic operator identities", cyclic_suite},
      {"orthogonal history factorization", ohf_suite},
      {"commuting diagram", diagram_suite},
      {"exact periodic reproduction", periodic_reproduction},
      {"almost-periodic prediction bound", almost_periodic_bound},
      {"wave equation pipeline", wave_pipeline},
      {"least-squares oracle", least_squares_oracle},
      {"persistence", persistence},
      {"CLI determinism", cli_determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << (i + 1) << "  " << criteria[i].first << ": "
              << o.detail << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size()
            << " acceptance criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
