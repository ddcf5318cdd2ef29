#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sclrom/ohf.hpp"
#include "sclrom/types.hpp"

namespace sclrom {

/// C_m: ones on the subdiagonal and in the top-right corner, so that
/// C_m e_j = e_{j+1 mod m}.
Matrix cyclic_shift_matrix(Index m);

/// sum_j c_j C_m^j, stored by its coefficient vector (which is also the first
/// column of the matrix it represents).
class CirculantElement {
 public:
  explicit CirculantElement(Vector coeffs);
  static CirculantElement identity(Index m);

  Index order() const noexcept { return coeffs_.size(); }
  const Vector& coeffs() const noexcept { return coeffs_; }

  Matrix to_matrix() const;
  /// Applies the represented matrix to x without forming it.
  Vector apply(const Vector& x) const;

  /// Product in Circ(m): cyclic convolution of the coefficient vectors.
  friend CirculantElement operator*(const CirculantElement& a, const CirculantElement& b);
  friend CirculantElement operator+(const CirculantElement& a, const CirculantElement& b);

 private:
  Vector coeffs_;
};

/// scale * C_m^(t mod m).
CirculantElement monomial_element(Index m, std::uint64_t t, Complex scale);

/// Pi_m(X) = Vhat* X Vhat. On polynomials in U_csf this is the circulant
/// representation: U_csf^d maps to C_m^d.
Matrix compress_pi_m(const OhfFactorization& ohf, const Matrix& X);

/// Phi(Y) = Vhat Y Vhat*, a product-preserving lift from m x m into the
/// commutant of P = Vhat Vhat*.
Matrix lift_phi(const OhfFactorization& ohf, const Matrix& Y);

/// phi(X) = P X P with P = Vhat Vhat*; equals lift_phi(compress_pi_m(X)).
Matrix compress_phi_small(const OhfFactorization& ohf, const Matrix& X);

struct DiagramReport {
  std::vector<Index> degrees;
  std::vector<double> per_degree;  // max of the residuals below, per degree
  double max_residual = 0.0;
  bool pass = false;
};

/// For each degree d, with X = U_csf^d, measures
///   |phi(X) - Phi(pi_m(X))|,  |pi_m(X) - C_m^d|,
/// and for a seeded random polynomial p of degree d
///   |phi(p(U_csf)) - p(phi(U_csf))|,  |pi_m(p(U_csf)) - p(C_m)|,
/// where p(phi(U_csf)) takes P as the unit of the compressed algebra.
DiagramReport check_diagram(const OhfFactorization& ohf, std::span<const Index> degrees,
                            double tol, std::uint64_t seed = 0);

enum class ManifoldTag { circle, cyclic_group };

/// A control for a history: the OHF (carrying Z = U_csf, K, T and P) plus
/// one algebra element f_t per step.
class ControlTuple {
 public:
  ControlTuple(OhfFactorization ohf, std::vector<CirculantElement> elements, ManifoldTag tag);

  const OhfFactorization& ohf() const noexcept { return ohf_; }
  const std::vector<CirculantElement>& elements() const noexcept { return elements_; }
  ManifoldTag tag() const noexcept { return tag_; }

  /// Theta_t(x) = K phi(f_t(Z)) T x, evaluated through dense powers of
  /// U_csf. This is the operator route; the fitted model's predict goes
  /// through the circulant factorisation instead.
  Vector evaluate(std::size_t t, const Vector& x) const;

 private:
  OhfFactorization ohf_;
  std::vector<CirculantElement> elements_;
  ManifoldTag tag_;
};

}  // namespace sclrom
