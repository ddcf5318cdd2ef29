#include "sclrom/circulant.hpp"

#include <algorithm>

#include "sclrom/random.hpp"

namespace sclrom {

Matrix cyclic_shift_matrix(Index m) {
  if (m < 1) throw Error(ErrorCode::DimensionMismatch, "cyclic shift needs m >= 1");
  Matrix c = Matrix::Zero(m, m);
  for (Index j = 0; j < m; ++j) c((j + 1) % m, j) = 1.0;
  return c;
}

CirculantElement::CirculantElement(Vector coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.size() < 1)
    throw Error(ErrorCode::DimensionMismatch, "circulant element needs order >= 1");
}

CirculantElement CirculantElement::identity(Index m) { return CirculantElement(Vector::Unit(m, 0)); }

Matrix CirculantElement::to_matrix() const {
  const Index m = order();
  Matrix out(m, m);
  for (Index col = 0; col < m; ++col) {
    for (Index row = 0; row < m; ++row) out(row, col) = coeffs_((row - col + m) % m);
  }
  return out;
}

Vector CirculantElement::apply(const Vector& x) const {
  const Index m = order();
  if (x.size() != m) throw Error(ErrorCode::DimensionMismatch, "circulant apply: size mismatch");
  Vector out = Vector::Zero(m);
  for (Index row = 0; row < m; ++row) {
    for (Index col = 0; col < m; ++col) out(row) += coeffs_((row - col + m) % m) * x(col);
  }
  return out;
}

CirculantElement operator*(const CirculantElement& a, const CirculantElement& b) {
  const Index m = a.order();
  if (b.order() != m) throw Error(ErrorCode::DimensionMismatch, "circulant orders differ");
  Vector out = Vector::Zero(m);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) out((i + j) % m) += a.coeffs_(i) * b.coeffs_(j);
  }
  return CirculantElement(std::move(out));
}

CirculantElement operator+(const CirculantElement& a, const CirculantElement& b) {
  if (b.order() != a.order()) throw Error(ErrorCode::DimensionMismatch, "circulant orders differ");
  return CirculantElement(a.coeffs_ + b.coeffs_);
}

CirculantElement monomial_element(Index m, std::uint64_t t, Complex scale) {
  if (m < 1) throw Error(ErrorCode::DimensionMismatch, "monomial needs m >= 1");
  Vector c = Vector::Zero(m);
  c(static_cast<Index>(t % static_cast<std::uint64_t>(m))) = scale;
  return CirculantElement(std::move(c));
}

namespace {

void require_square(const OhfFactorization& ohf, const Matrix& X, Index size, const char* what) {
  if (X.rows() != size || X.cols() != size)
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + ": expected " + std::to_string(size) + "x" +
                    std::to_string(size) + " (n = " + std::to_string(ohf.n()) +
                    ", m = " + std::to_string(ohf.m()) + ")");
}

}  // namespace

Matrix compress_pi_m(const OhfFactorization& ohf, const Matrix& X) {
  require_square(ohf, X, ohf.n(), "compress_pi_m");
  return ohf.Vhat.adjoint() * X * ohf.Vhat;
}

Matrix lift_phi(const OhfFactorization& ohf, const Matrix& Y) {
  require_square(ohf, Y, ohf.m(), "lift_phi");
  return ohf.Vhat * Y * ohf.Vhat.adjoint();
}

Matrix compress_phi_small(const OhfFactorization& ohf, const Matrix& X) {
  require_square(ohf, X, ohf.n(), "compress_phi_small");
  const Matrix P = ohf.Vhat * ohf.Vhat.adjoint();
  return P * X * P;
}

DiagramReport check_diagram(const OhfFactorization& ohf, std::span<const Index> degrees,
                            double tol, std::uint64_t seed) {
  const Index n = ohf.n();
  const Index m = ohf.m();
  if (ohf.U_csf.rows() != n || ohf.U_csf.cols() != n)
    throw Error(ErrorCode::DimensionMismatch, "check_diagram: malformed OHF");

  const Matrix P = ohf.Vhat * ohf.Vhat.adjoint();
  const Matrix Cm = cyclic_shift_matrix(m);
  const Matrix phi_U = compress_phi_small(ohf, ohf.U_csf);
  GaussianSource source(seed);

  DiagramReport report;
  report.degrees.assign(degrees.begin(), degrees.end());
  for (const Index d : degrees) {
    if (d < 0) throw Error(ErrorCode::DimensionMismatch, "negative degree");
    const Vector coeffs = source.complex_vector(d + 1);

    // Powers built by repeated multiplication, accumulated alongside p(.)
    Matrix u_pow = Matrix::Identity(n, n);
    Matrix c_pow = Matrix::Identity(m, m);
    Matrix phi_pow = P;
    Matrix p_of_u = Matrix::Zero(n, n);
    Matrix p_of_c = Matrix::Zero(m, m);
    Matrix p_of_phi = Matrix::Zero(n, n);
    for (Index k = 0; k <= d; ++k) {
      if (k > 0) {
        u_pow = u_pow * ohf.U_csf;
        c_pow = c_pow * Cm;
        phi_pow = phi_pow * phi_U;
      }
      p_of_u += coeffs(k) * u_pow;
      p_of_c += coeffs(k) * c_pow;
      p_of_phi += coeffs(k) * phi_pow;
    }

    const Matrix pi_x = compress_pi_m(ohf, u_pow);
    const double commute = (compress_phi_small(ohf, u_pow) - lift_phi(ohf, pi_x)).norm();
    const double rep = (pi_x - c_pow).norm();
    const double poly_phi = (compress_phi_small(ohf, p_of_u) - p_of_phi).norm();
    const double poly_pi = (compress_pi_m(ohf, p_of_u) - p_of_c).norm();
    const double worst = std::max({commute, rep, poly_phi, poly_pi});
    report.per_degree.push_back(worst);
    report.max_residual = std::max(report.max_residual, worst);
  }
  report.pass = report.max_residual <= tol;
  return report;
}

ControlTuple::ControlTuple(OhfFactorization ohf, std::vector<CirculantElement> elements,
                           ManifoldTag tag)
    : ohf_(std::move(ohf)), elements_(std::move(elements)), tag_(tag) {
  if (elements_.empty()) throw Error(ErrorCode::DimensionMismatch, "control needs elements");
  for (const auto& e : elements_) {
    if (e.order() != ohf_.m())
      throw Error(ErrorCode::DimensionMismatch, "control element order differs from OHF size");
  }
}

Vector ControlTuple::evaluate(std::size_t t, const Vector& x) const {
  const CirculantElement& f = elements_[t % elements_.size()];
  const Index n = ohf_.n();
  Matrix f_of_z = Matrix::Zero(n, n);
  Matrix z_pow = Matrix::Identity(n, n);
  for (Index j = 0; j < f.order(); ++j) {
    if (j > 0) z_pow = z_pow * ohf_.U_csf;
    f_of_z += f.coeffs()(j) * z_pow;
  }
  return ohf_.K * (compress_phi_small(ohf_, f_of_z) * (ohf_.T * x));
}

}  // namespace sclrom
