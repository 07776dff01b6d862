#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <type_traits>

#include <gmpxx.h>

namespace minctrl {

using Rational = mpq_class;
using Complex = std::complex<double>;

/// Exact complex number with rational real and imaginary parts (an element of Q(i)).
class GaussRational {
 public:
  GaussRational() = default;
  GaussRational(Rational re, Rational im = 0) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }
  GaussRational(long v) : re_(v), im_(0) {}  // NOLINT(google-explicit-constructor)

  const Rational& real() const { return re_; }
  const Rational& imag() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }

  GaussRational conj() const { return {re_, -im_}; }

  GaussRational& operator+=(const GaussRational& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  GaussRational& operator-=(const GaussRational& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  GaussRational& operator*=(const GaussRational& o) {
    Rational re = re_ * o.re_ - im_ * o.im_;
    Rational im = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
  }
  GaussRational& operator/=(const GaussRational& o);

  friend GaussRational operator+(GaussRational a, const GaussRational& b) { return a += b; }
  friend GaussRational operator-(GaussRational a, const GaussRational& b) { return a -= b; }
  friend GaussRational operator*(GaussRational a, const GaussRational& b) { return a *= b; }
  friend GaussRational operator/(GaussRational a, const GaussRational& b) { return a /= b; }
  friend GaussRational operator-(const GaussRational& a) { return {-a.re_, -a.im_}; }
  friend bool operator==(const GaussRational& a, const GaussRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const GaussRational& a, const GaussRational& b) { return !(a == b); }

 private:
  Rational re_{0};
  Rational im_{0};
};

/// Per-scalar facts used by the generic algorithms.
template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool kExact = false;
  static constexpr bool kComplex = false;
  using RealType = double;
  using ComplexType = Complex;
};

template <>
struct ScalarTraits<Complex> {
  static constexpr bool kExact = false;
  static constexpr bool kComplex = true;
  using RealType = double;
  using ComplexType = Complex;
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool kExact = true;
  static constexpr bool kComplex = false;
  using RealType = Rational;
  using ComplexType = GaussRational;
};

template <>
struct ScalarTraits<GaussRational> {
  static constexpr bool kExact = true;
  static constexpr bool kComplex = true;
  using RealType = Rational;
  using ComplexType = GaussRational;
};

template <class T>
inline constexpr bool kIsExact = ScalarTraits<T>::kExact;

template <class T>
inline constexpr bool kIsComplex = ScalarTraits<T>::kComplex;

inline double conj(double x) { return x; }
inline Complex conj(const Complex& x) { return std::conj(x); }
inline Rational conj(const Rational& x) { return x; }
inline GaussRational conj(const GaussRational& x) { return x.conj(); }

inline double real_part(double x) { return x; }
inline double real_part(const Complex& x) { return x.real(); }
inline Rational real_part(const Rational& x) { return x; }
inline Rational real_part(const GaussRational& x) { return x.real(); }

inline double imag_part(double) { return 0.0; }
inline double imag_part(const Complex& x) { return x.imag(); }
inline Rational imag_part(const Rational&) { return 0; }
inline Rational imag_part(const GaussRational& x) { return x.imag(); }

inline Complex make_complex(double re, double im) { return {re, im}; }
inline GaussRational make_complex(const Rational& re, const Rational& im) { return {re, im}; }

inline Complex to_complex(double x) { return {x, 0.0}; }
inline Complex to_complex(const Complex& x) { return x; }
inline GaussRational to_complex(const Rational& x) { return {x, 0}; }
inline GaussRational to_complex(const GaussRational& x) { return x; }

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.get_d(); }
inline Complex to_floating(double x) { return {x, 0.0}; }
inline Complex to_floating(const Complex& x) { return x; }
inline Complex to_floating(const Rational& x) { return {x.get_d(), 0.0}; }
inline Complex to_floating(const GaussRational& x) { return {x.real().get_d(), x.imag().get_d()}; }

/// |x| as a double; used for diagnostics on either backend.
inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const Complex& x) { return std::abs(x); }
inline double magnitude(const Rational& x) { return std::abs(x.get_d()); }
inline double magnitude(const GaussRational& x) { return std::abs(to_floating(x)); }

inline bool is_exact_zero(const Rational& x) { return sgn(x) == 0; }
inline bool is_exact_zero(const GaussRational& x) { return x.is_zero(); }

/// Canonical text form: "p/q" (or "p") for rationals, "%.17g" for doubles.
std::string to_string(double x);
std::string to_string(const Rational& x);

/// Simplest rational (smallest denominator) in the closed interval [lo, hi].
Rational simplest_rational_between(const Rational& lo, const Rational& hi);

/// Smallest-denominator rational that rounds to exactly `x`, provided its
/// denominator is at most `max_denominator`. Non-finite inputs yield nullopt.
std::optional<Rational> rationalize(double x, std::uint64_t max_denominator = 1'000'000);

/// num / 2^bits, exactly representable on both backends for bits <= 52.
template <class R>
R dyadic(std::int64_t num, unsigned bits) {
  if constexpr (std::is_same_v<R, Rational>) {
    Rational r(static_cast<long>(num));
    mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), bits);
    return r;
  } else {
    return std::ldexp(static_cast<double>(num), -static_cast<int>(bits));
  }
}

}  // namespace minctrl
