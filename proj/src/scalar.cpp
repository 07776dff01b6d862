#include "minctrl/scalar.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "minctrl/errors.hpp"

namespace minctrl {

GaussRational& GaussRational::operator/=(const GaussRational& o) {
  const Rational denom = o.re_ * o.re_ + o.im_ * o.im_;
  if (sgn(denom) == 0) {
    throw Error(ErrorCode::kInvalidArgument, "division by zero in Q(i)");
  }
  Rational re = (re_ * o.re_ + im_ * o.im_) / denom;
  Rational im = (im_ * o.re_ - re_ * o.im_) / denom;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

std::string to_string(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string to_string(const Rational& x) { return x.get_str(); }

Rational simplest_rational_between(const Rational& lo, const Rational& hi) {
  if (lo > hi) return simplest_rational_between(hi, lo);
  if (sgn(lo) <= 0 && sgn(hi) >= 0) return 0;
  if (sgn(hi) < 0) return -simplest_rational_between(-hi, -lo);
  // 0 < lo <= hi
  mpz_class c;
  mpz_cdiv_q(c.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
  if (Rational(c) <= hi) return Rational(c);
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
  const Rational ff(f);
  // lo and hi share the integer part f and neither is an integer here.
  const Rational inner = simplest_rational_between(1 / Rational(hi - ff), 1 / Rational(lo - ff));
  return ff + 1 / inner;
}

std::optional<Rational> rationalize(double x, std::uint64_t max_denominator) {
  if (!std::isfinite(x)) return std::nullopt;
  const Rational exact(x);
  const double below = std::nextafter(x, -std::numeric_limits<double>::infinity());
  const double above = std::nextafter(x, std::numeric_limits<double>::infinity());
  const Rational lo = (Rational(below) + exact) / 2;
  const Rational hi = std::isfinite(above) ? Rational((Rational(above) + exact) / 2) : exact;
  Rational r = simplest_rational_between(lo, hi);
  if (r == lo || r == hi) r = exact;  // ties might round away from x
  if (r.get_den() > max_denominator) return std::nullopt;
  return r;
}

}  // namespace minctrl
