#include <doctest.h>

#include <Eigen/SVD>
#include <vector>

#include "sclrom/datagen.hpp"
#include "sclrom/model.hpp"
#include "sclrom/random.hpp"
#include "support.hpp"

using namespace sclrom;
using sclrom::test::bitwise_equal;
using sclrom::test::diff;
using sclrom::test::normal_equations;
using sclrom::test::power;

namespace {

SnapshotHistory random_history(Index n, Index m, std::uint64_t seed) {
  GaussianSource rng(seed);
  return SnapshotHistory(rng.complex_matrix(n, m));
}

FitOptions lsq() {
  FitOptions o;
  o.mode = FitMode::least_squares;
  return o;
}

Index dense_rank(const Matrix& a, double rel_tol = 1e-10) {
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& s = svd.singularValues();
  Index r = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) ++r;
  return r;
}

}  // namespace

TEST_CASE("monomial fit reproduces periodic data") {
  const SnapshotHistory h = gen_periodic_history(64, 8, 1);
  FitOptions opts;
  opts.epsilon = 1e-10;
  const FitResult r = fit(h, opts);
  CHECK(r.target_met);
  CHECK(r.model.epsilon_achieved <= 1e-10);
  CHECK(r.model.m() == 8);
  CHECK(r.model.period == 8);
  CHECK(r.model.epsilon_target == 1e-10);
  const Complex scale = r.model.ohf.kappa / r.model.ohf.rho;
  for (Index t = 0; t < 8; ++t) {
    Vector expected = Vector::Zero(8);
    expected(t) = scale;
    CHECK(diff(r.model.coeffs.col(t), expected) == 0.0);
  }

  SUBCASE("predict") {
    const SclRomModel& m = r.model;
    CHECK((predict(m, 0) - h.column(0)).norm() <= m.epsilon_achieved + 1e-15);
    CHECK((predict(m, 8) - h.column(0)).norm() <= 1e-10 * h.column(0).norm());
    CHECK((predict(m, 3) - h.column(3)).norm() <= 1e-10 * h.column(3).norm());
    for (std::uint64_t t = 0; t < 40; ++t) CHECK(bitwise_equal(predict(m, t), predict(m, t % 8)));
  }
  SUBCASE("verify_mimetic") {
    const MimeticReport rep = verify_mimetic(r.model, h, 1e-10);
    CHECK(rep.pass);
    CHECK(rep.max_residual <= 1e-10);
    CHECK(rep.m == 8);
    CHECK(rep.n == 64);
    CHECK(rep.per_step.size() == 7);
    CHECK(verify_mimetic(r.model, h, 0.0).pass == (rep.max_residual == 0.0));
    CHECK_THROWS_AS(verify_mimetic(r.model, random_history(10, 8, 1), 1.0), Error);
  }
}

TEST_CASE("larger periodic data at desk scale") {
  const SnapshotHistory h = gen_periodic_history(512, 48, 12);
  const FitResult r = fit(h);
  CHECK(r.model.epsilon_achieved <= 1e-10);
  CHECK(verify_mimetic(r.model, h, 1e-10).pass);
}

TEST_CASE("single snapshot model") {
  const SnapshotHistory h(random_history(5, 1, 4));
  const FitResult r = fit(h);
  REQUIRE(r.model.coeffs.rows() == 1);
  REQUIRE(r.model.coeffs.cols() == 1);
  CHECK(std::abs(r.model.coeffs(0, 0) - r.model.ohf.kappa / r.model.ohf.rho) == 0.0);
  CHECK((predict(r.model, 0) - h.column(0)).norm() <= 1e-12 * h.column(0).norm());
}

TEST_CASE("transition_matrix") {
  SUBCASE("orthonormal snapshots give the projector at t = 0") {
    const SnapshotHistory h(random_orthonormal_frame(9, 3, 2));
    const FitResult r = fit(h);
    CHECK(std::abs(r.model.ohf.kappa - 1.0) < 1e-14);
    CHECK(std::abs(r.model.ohf.rho - 1.0) < 1e-14);
    const Matrix& vhat = r.model.ohf.Vhat;
    CHECK(diff(transition_matrix(r.model, 0), vhat * vhat.adjoint()) < 1e-14);
  }
  SUBCASE("rank of every step operator") {
    const FitResult r = fit(random_history(32, 8, 13), lsq());
    for (std::uint64_t t = 0; t < 8; ++t) {
      const Matrix ht = transition_matrix(r.model, t);
      CHECK(dense_rank(ht) <= 8);
    }
    const FitResult mono = fit(random_history(32, 8, 13));
    for (std::uint64_t t = 0; t < 8; ++t) CHECK(dense_rank(transition_matrix(mono.model, t)) == 8);
  }
}

TEST_CASE("control tuple agrees with predict") {
  const SnapshotHistory h = random_history(20, 5, 31);
  FitOptions opts = lsq();
  opts.history_size = 3;
  const FitResult r = fit(h, opts);
  const ControlTuple ct = r.model.control(ManifoldTag::circle);
  const Vector x0 = r.model.ohf.anchor();
  for (std::size_t t = 0; t < 10; ++t) {
    const Vector p = predict(r.model, t);
    CHECK((ct.evaluate(t, x0) - p).norm() <= 1e-10 * std::max(1.0, p.norm()));
  }
}

TEST_CASE("least-squares coefficients match the normal equations") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    CAPTURE(seed);
    const Index m = 2 + static_cast<Index>(seed % 4);
    const SnapshotHistory h = random_history(3 * m, 2 * m, seed);
    FitOptions opts = lsq();
    opts.history_size = m;
    const FitResult r = fit(h, opts);
    const OhfFactorization& f = r.model.ohf;
    const Matrix a = f.rho * h.leading(m).data() / f.singular_values(0);
    for (Index t = 0; t < 2 * m; ++t) {
      const Vector c = normal_equations(a, h.column(t));
      CHECK((r.model.coeffs.col(t) - c).norm() <= 1e-8 * c.norm());
    }
  }
}

TEST_CASE("least squares never does worse than the monomial fit") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    CAPTURE(seed);
    const Index m = 1 + static_cast<Index>(seed % 5);
    const SnapshotHistory h = random_history(2 * m + 3, m + static_cast<Index>(seed % 3), seed);
    FitOptions mono;
    mono.history_size = m;
    FitOptions ls = lsq();
    ls.history_size = m;
    const double em = fit(h, mono).model.epsilon_achieved;
    const double el = fit(h, ls).model.epsilon_achieved;
    CHECK(el <= em + 1e-12);
  }
}

TEST_CASE("fit coefficients are independent of evaluation order") {
  const SnapshotHistory h = random_history(16, 7, 71);
  FitOptions opts = lsq();
  opts.history_size = 4;
  const FitResult r = fit(h, opts);
  for (Index t = 6; t >= 0; --t)
    CHECK(bitwise_equal(r.model.coeffs.col(t), least_squares_coeffs(r.model.ohf, h.column(t))));
}

TEST_CASE("almost-periodic data stays within twice the perturbation") {
  const double eps = 1e-3;
  const AlmostPeriodicHistory data = gen_almost_periodic_history(64, 8, eps, 16, 2);
  FitOptions opts = lsq();
  opts.period = 8;
  const FitResult r = fit(data.noisy.leading(8), opts);
  double worst = 0.0;
  for (Index t = 8; t < 16; ++t)
    worst = std::max(worst, (predict(r.model, t) - data.noisy.column(t)).norm());
  CHECK(worst <= 2.0 * eps + 1e-10);
}

TEST_CASE("fit errors and options") {
  const SnapshotHistory h = random_history(8, 4, 3);
  FitOptions opts;
  opts.period = 5;
  CHECK_THROWS_AS(fit(h, opts), Error);
  opts.period = 4;
  opts.history_size = 0;
  CHECK_THROWS_AS(fit(h, opts), Error);

  try {
    fit(random_history(7, 4, 3));
    FAIL("expected DimensionTooSmall");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionTooSmall);
  }

  Matrix degenerate = random_history(10, 3, 9).data();
  degenerate.col(2) = degenerate.col(0) + degenerate.col(1);
  CHECK_THROWS_AS(fit(SnapshotHistory(degenerate)), DegenerateHistoryError);

  FitOptions trunc;
  trunc.truncate_rank = true;
  const FitResult tr = fit(SnapshotHistory(degenerate), trunc);
  CHECK(tr.model.m() == 2);
  CHECK(tr.model.period == 3);

  // Missing the target is reported, not thrown.
  FitOptions strict;
  strict.epsilon = 0.0;
  const AlmostPeriodicHistory noisy = gen_almost_periodic_history(32, 4, 1e-2, 8, 5);
  strict.period = 8;
  strict.history_size = 4;
  const FitResult missed = fit(noisy.noisy, strict);
  CHECK_FALSE(missed.target_met);
  CHECK(missed.model.epsilon_achieved > 0.0);
}

TEST_CASE("detect_period") {
  SUBCASE("exact period") {
    const SnapshotHistory h = gen_periodic_history(12, 4, 3, 16);
    const std::vector<Index> cands{2, 3, 4, 5};
    const PeriodReport r = detect_period(h, cands, 1e-12);
    CHECK(r.best_T == 4);
    CHECK(r.scores[2] == 0.0);
    CHECK(r.within_tol);
  }
  SUBCASE("constant history ties to the smallest candidate") {
    Matrix c(3, 6);
    for (Index j = 0; j < 6; ++j) c.col(j) = Vector::Constant(3, Complex(1, 2));
    const std::vector<Index> cands{3, 1, 2};
    CHECK(detect_period(SnapshotHistory(c), cands, 0.0).best_T == 1);
  }
  SUBCASE("noisy period") {
    const double scale = gen_periodic_history(32, 4, 8).max_column_norm();
    const AlmostPeriodicHistory data = gen_almost_periodic_history(32, 4, 1e-3 * scale, 16, 8);
    const std::vector<Index> cands{2, 3, 4, 5};
    const PeriodReport r = detect_period(data.noisy, cands, 1e-2);
    CHECK(r.best_T == 4);
    CHECK(r.scores[2] >= 0.5e-3);
    CHECK(r.scores[2] <= 4e-3);
  }
  SUBCASE("errors") {
    const SnapshotHistory h = gen_periodic_history(12, 4, 3, 6);
    const std::vector<Index> too_long{4};
    CHECK_THROWS_AS(detect_period(h, too_long, 0.0), Error);
    CHECK_THROWS_AS(detect_period(h, std::vector<Index>{}, 0.0), Error);
  }
}
