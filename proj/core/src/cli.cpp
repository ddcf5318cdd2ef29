#include "sclrom/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "sclrom/datagen.hpp"
#include "sclrom/io.hpp"
#include "sclrom/model.hpp"

namespace sclrom {

namespace {

constexpr const char* kRule = "-------------------------------------------------------------";

std::string sci(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4e", value);
  return buf;
}

void banner(std::ostream& out, const char* title) {
  out << kRule << '\n' << title << '\n' << kRule << '\n';
}

struct SimulateArgs {
  std::string kind;
  Index n = 64;
  Index T = 8;
  std::uint64_t seed = 1;
  Index horizon = 0;
  double eps_pert = 1e-3;
  Index nx = 100;
  Index nt = 40;
  double dt = 0.0;
  double L = 1.0;
  double c = 1.0;
  std::string profile = "sine";
  int mode = 1;
  double center = 0.5;
  double width = 0.1;
  double amplitude = 1.0;
  Index substeps = 0;
  std::string out;
  std::string clean_out;
  std::string format = "binary";
};

struct FitArgs {
  std::string snapshots;
  std::string mode = "monomial";
  double eps = 1e-10;
  double rank_tol = kDefaultRankTol;
  bool truncate_rank = false;
  Index period = 0;
  Index history_size = 0;
  std::string out;
};

struct VerifyArgs {
  std::string model;
  std::string snapshots;
  double eps = -1.0;
};

struct PredictArgs {
  std::string model;
  Index from = 0;
  Index to = -1;
  std::string out;
  std::string format = "binary";
};

struct PlotArgs {
  std::string snapshots;
  std::string predictions;
  std::string model;
  std::vector<Index> components;
  std::string out;
};

SnapshotFormat parse_format(const std::string& name) {
  return name == "csv" ? SnapshotFormat::csv : SnapshotFormat::binary;
}

int run_simulate(const SimulateArgs& a, bool banners, std::ostream& out) {
  if (banners) banner(out, "                     Running simulation:");
  SnapshotHistory history(Matrix::Zero(1, 1));
  if (a.kind == "periodic") {
    history = gen_periodic_history(a.n, a.T, a.seed, a.horizon > 0 ? std::optional<Index>(a.horizon)
                                                                    : std::nullopt);
  } else if (a.kind == "almost-periodic") {
    const Index horizon = a.horizon > 0 ? a.horizon : 2 * a.T;
    AlmostPeriodicHistory pair = gen_almost_periodic_history(a.n, a.T, a.eps_pert, horizon, a.seed);
    if (!a.clean_out.empty()) write_snapshots(pair.clean, a.clean_out, parse_format(a.format));
    history = std::move(pair.noisy);
  } else {
    WaveConfig cfg;
    cfg.L = a.L;
    cfg.c = a.c;
    cfg.nx = a.nx;
    cfg.nt = a.nt;
    if (a.dt > 0.0) cfg.dt = a.dt;
    if (a.substeps > 0) cfg.substeps = a.substeps;
    cfg.profile = a.profile == "gaussian" ? WaveProfile::gaussian(a.center, a.width, a.amplitude)
                                          : WaveProfile::sine(a.mode, a.amplitude);
    history = simulate_wave_1d(cfg);
  }
  write_snapshots(history, a.out, parse_format(a.format));
  out << "simulate " << a.kind << ": wrote " << history.n() << " x " << history.m()
      << " snapshots to " << a.out << '\n';
  return kExitOk;
}

int run_fit(const FitArgs& a, bool banners, std::ostream& out) {
  const SnapshotHistory history = read_snapshots(a.snapshots);
  FitOptions opts;
  opts.mode = a.mode == "lsq" ? FitMode::least_squares : FitMode::monomial;
  opts.epsilon = a.eps;
  opts.rank_tol = a.rank_tol;
  opts.truncate_rank = a.truncate_rank;
  if (a.period > 0) opts.period = a.period;
  if (a.history_size > 0) opts.history_size = a.history_size;

  if (banners) banner(out, " Computing circular matrix representations in C[U[v1|vm]]:");
  const FitResult result = fit(history, opts);
  write_model(result.model, a.out);

  const SclRomModel& model = result.model;
  out << "fit: n = " << model.n() << ", m = " << model.m() << ", T = " << model.period
      << ", mode = " << (opts.mode == FitMode::monomial ? "monomial" : "lsq") << '\n';
  out << "kappa = " << sci(model.ohf.kappa.real()) << ", rho = " << sci(model.ohf.rho.real())
      << '\n';
  out << "epsilon_achieved = " << sci(model.epsilon_achieved) << '\n';
  out << "target eps = " << sci(opts.epsilon) << (result.target_met ? " (met)" : " (not met)")
      << '\n';
  out << "model written to " << a.out << '\n';
  return kExitOk;
}

int run_verify(const VerifyArgs& a, bool banners, std::ostream& out) {
  const SclRomModel model = read_model(a.model);
  const SnapshotHistory history = read_snapshots(a.snapshots);
  const double eps = a.eps >= 0.0 ? a.eps : model.epsilon_target;
  const MimeticReport report = verify_mimetic(model, history, eps);

  if (banners) {
    banner(out, " Verifying circular mimetic constraints for C[U[v1|vm]]:");
    out << (report.pass ? "Verification passed..." : "Verification failed...") << '\n';
  }
  out << "max{||K U^k T x0 - xk|| | 1<=k<=m} = " << sci(report.max_residual)
      << (report.pass ? " <= eps" : " > eps") << '\n';
  if (banners) out << kRule << '\n';
  out << "For m = " << report.m << '\n';
  out << "For n = " << report.n << '\n';
  out << "For eps = " << sci(report.eps) << '\n';
  if (banners) out << kRule << '\n';
  return report.pass ? kExitOk : kExitVerifyFailed;
}

int run_predict(const PredictArgs& a, std::ostream& out) {
  const SclRomModel model = read_model(a.model);
  const Index to = a.to < 0 ? model.period : a.to;
  if (a.from < 0 || to <= a.from)
    throw Error(ErrorCode::DimensionMismatch, "empty prediction range [" + std::to_string(a.from) +
                                                  ", " + std::to_string(to) + ")");
  Matrix states(model.n(), to - a.from);
  for (Index t = a.from; t < to; ++t)
    states.col(t - a.from) = predict(model, static_cast<std::uint64_t>(t));
  write_snapshots(SnapshotHistory(std::move(states)), a.out, parse_format(a.format));
  out << "predict: wrote " << model.n() << " x " << (to - a.from) << " states for t in ["
      << a.from << ", " << to << ") to " << a.out << '\n';
  return kExitOk;
}

int run_export_plot(const PlotArgs& a, std::ostream& out) {
  const SnapshotHistory snapshots = read_snapshots(a.snapshots);
  std::optional<SnapshotHistory> predictions;
  if (!a.predictions.empty()) {
    predictions = read_snapshots(a.predictions);
  } else if (!a.model.empty()) {
    const SclRomModel model = read_model(a.model);
    Matrix states(model.n(), snapshots.m());
    for (Index t = 0; t < snapshots.m(); ++t)
      states.col(t) = predict(model, static_cast<std::uint64_t>(t));
    predictions = SnapshotHistory(std::move(states));
  }
  if (predictions && predictions->n() != snapshots.n())
    throw Error(ErrorCode::DimensionMismatch, "predictions and snapshots differ in state size");

  std::vector<Index> components = a.components;
  if (components.empty()) components.push_back(0);
  for (const Index c : components) {
    if (c < 0 || c >= snapshots.n())
      throw Error(ErrorCode::DimensionMismatch, "component " + std::to_string(c) + " out of range");
  }

  std::ofstream csv(a.out, std::ios::binary | std::ios::trunc);
  if (!csv) throw Error(ErrorCode::IoFailure, "cannot open '" + a.out + "' for writing");
  const Index steps = predictions ? std::min(snapshots.m(), predictions->m()) : snapshots.m();
  csv << "t";
  if (predictions) csv << ",residual";
  for (const Index c : components) {
    csv << ",x" << c << "_re,x" << c << "_im";
    if (predictions) csv << ",xhat" << c << "_re,xhat" << c << "_im";
  }
  csv << '\n';
  for (Index t = 0; t < steps; ++t) {
    csv << t;
    if (predictions)
      csv << ',' << sci((predictions->column(t) - snapshots.column(t)).norm());
    for (const Index c : components) {
      const Complex x = snapshots.data()(c, t);
      csv << ',' << sci(x.real()) << ',' << sci(x.imag());
      if (predictions) {
        const Complex y = predictions->data()(c, t);
        csv << ',' << sci(y.real()) << ',' << sci(y.imag());
      }
    }
    csv << '\n';
  }
  csv.flush();
  if (!csv) throw Error(ErrorCode::IoFailure, "write to '" + a.out + "' failed");
  out << "export-plot: wrote " << steps << " rows to " << a.out << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Switched closed-loop reduced-order models from snapshot histories", "sclrom"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string log_style = "plain";
  app.add_option("--log-style", log_style, "Report style: plain, or banner (alias paper) for ruled log blocks")
      ->check(CLI::IsMember({"plain", "banner", "paper"}));

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Generate a snapshot history");
  simulate->add_option("kind", sim.kind, "Generator")
      ->required()
      ->check(CLI::IsMember({"wave", "periodic", "almost-periodic"}));
  simulate->add_option("--n", sim.n, "State dimension (periodic generators)");
  simulate->add_option("--T", sim.T, "Period (periodic generators)");
  simulate->add_option("--seed", sim.seed, "Seed");
  simulate->add_option("--horizon", sim.horizon, "Columns to emit (periodic generators)");
  simulate->add_option("--eps-pert", sim.eps_pert, "Perturbation norm (almost-periodic)");
  simulate->add_option("--nx", sim.nx, "Interior grid points (wave)");
  simulate->add_option("--nt", sim.nt, "Time steps (wave)");
  simulate->add_option("--dt", sim.dt, "Time step (wave; default one period over nt)");
  simulate->add_option("--L", sim.L, "Domain length (wave)");
  simulate->add_option("--c", sim.c, "Wave speed (wave)");
  simulate->add_option("--profile", sim.profile, "Initial profile (wave)")
      ->check(CLI::IsMember({"sine", "gaussian"}));
  simulate->add_option("--mode", sim.mode, "Sine mode number (wave)");
  simulate->add_option("--center", sim.center, "Gaussian centre (wave)");
  simulate->add_option("--width", sim.width, "Gaussian width (wave)");
  simulate->add_option("--amplitude", sim.amplitude, "Profile amplitude (wave)");
  simulate->add_option("--substeps", sim.substeps, "Crank-Nicolson steps per snapshot (wave)");
  simulate->add_option("--out", sim.out, "Output snapshot file")->required();
  simulate->add_option("--clean-out", sim.clean_out, "Unperturbed history (almost-periodic)");
  simulate->add_option("--format", sim.format, "Output format")
      ->check(CLI::IsMember({"binary", "csv"}));

  FitArgs fa;
  auto* fitcmd = app.add_subcommand("fit", "Fit a model to a snapshot history");
  fitcmd->add_option("snapshots", fa.snapshots, "Snapshot file")->required();
  fitcmd->add_option("--mode", fa.mode, "Coefficient mode")
      ->check(CLI::IsMember({"monomial", "lsq"}));
  fitcmd->add_option("--eps", fa.eps, "Target training residual");
  fitcmd->add_option("--rank-tol", fa.rank_tol, "Relative singular value cutoff");
  fitcmd->add_flag("--truncate-rank", fa.truncate_rank, "Reduce m to the numerical rank");
  fitcmd->add_option("--period", fa.period, "Steps T to fit (default: all snapshots)");
  fitcmd->add_option("--history-size", fa.history_size, "Snapshots m in the OHF (default: T)");
  fitcmd->add_option("--out", fa.out, "Output model file")->required();

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Check a model against snapshots");
  verify->add_option("model", va.model, "Model file")->required();
  verify->add_option("snapshots", va.snapshots, "Snapshot file")->required();
  verify->add_option("--eps", va.eps, "Threshold (default: the model's fit target)");

  PredictArgs pa;
  auto* predictcmd = app.add_subcommand("predict", "Write predicted states");
  predictcmd->add_option("model", pa.model, "Model file")->required();
  predictcmd->add_option("--from", pa.from, "First step (inclusive)");
  predictcmd->add_option("--to", pa.to, "Last step (exclusive; default T)");
  predictcmd->add_option("--out", pa.out, "Output snapshot file")->required();
  predictcmd->add_option("--format", pa.format, "Output format")
      ->check(CLI::IsMember({"binary", "csv"}));

  PlotArgs pl;
  auto* plot = app.add_subcommand("export-plot", "Write per-step residuals and components as CSV");
  plot->add_option("--snapshots", pl.snapshots, "Reference snapshot file")->required();
  auto* pred_opt = plot->add_option("--predictions", pl.predictions, "Predicted snapshot file");
  plot->add_option("--model", pl.model, "Model to predict from")->excludes(pred_opt);
  plot->add_option("--components", pl.components, "State components to export")->delimiter(',');
  plot->add_option("--out", pl.out, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "sclrom: " << e.what() << '\n';
    return kExitUsage;
  }

  const bool banners = log_style != "plain";
  try {
    if (simulate->parsed()) return run_simulate(sim, banners, out);
    if (fitcmd->parsed()) return run_fit(fa, banners, out);
    if (verify->parsed()) return run_verify(va, banners, out);
    if (predictcmd->parsed()) return run_predict(pa, out);
    if (plot->parsed()) return run_export_plot(pl, out);
  } catch (const Error& e) {
    err << "sclrom: " << to_string(e.code()) << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "sclrom: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace sclrom
