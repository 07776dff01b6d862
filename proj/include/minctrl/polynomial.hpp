#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "minctrl/matrix.hpp"

namespace minctrl {

/// Polynomial with rational coefficients, stored lowest degree first.
class RationalPolynomial {
 public:
  RationalPolynomial() = default;
  explicit RationalPolynomial(std::vector<Rational> coeffs);

  /// Degree; the zero polynomial reports 0.
  std::size_t degree() const { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  const Rational& operator[](std::size_t k) const { return coeffs_[k]; }

  Rational operator()(const Rational& x) const;

  friend bool operator==(const RationalPolynomial& a, const RationalPolynomial& b) {
    return a.coeffs_ == b.coeffs_;
  }

 private:
  std::vector<Rational> coeffs_;  // trailing zeros trimmed
};

/// Quotient and remainder of a / b; b must be nonzero.
std::pair<RationalPolynomial, RationalPolynomial> divmod(const RationalPolynomial& a,
                                                         const RationalPolynomial& b);

/// det(x I - A), monic, via exact reduction to Hessenberg form.
RationalPolynomial characteristic_polynomial(const RationalMatrix& a);

/// A root of a rational polynomial with a rational or Gaussian-rational value.
/// Complex roots are reported once, with positive imaginary part; the
/// conjugate root carries the same multiplicity.
struct CertifiedRoot {
  GaussRational value;
  std::size_t multiplicity = 0;
};

/// Splits `p` completely into linear factors over Q and conjugate-pair
/// quadratic factors with Gaussian-rational roots. Rational roots are found by
/// the rational root theorem; numeric `estimates` propose further candidates,
/// each confirmed by exact division. Returns nullopt when some factor has
/// irrational roots. Roots are sorted: reals ascending, then complex by (re, im).
std::optional<std::vector<CertifiedRoot>> certify_roots(const RationalPolynomial& p,
                                                        const std::vector<Complex>& estimates);

}  // namespace minctrl
