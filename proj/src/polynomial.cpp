#include "minctrl/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace minctrl {
namespace {

// Divisor enumeration is only attempted when |coefficient| is below this bound.
const mpz_class kDivisorSearchLimit("1000000000000");

std::vector<mpz_class> positive_divisors(mpz_class v) {
  if (sgn(v) < 0) v = -v;
  std::vector<mpz_class> small;
  std::vector<mpz_class> large;
  for (mpz_class d = 1; d * d <= v; ++d) {
    if (mpz_divisible_p(v.get_mpz_t(), d.get_mpz_t())) {
      small.push_back(d);
      mpz_class e = v / d;
      if (e != d) large.push_back(e);
    }
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

// Primitive integer multiple of p (same roots).
std::vector<mpz_class> integer_coefficients(const RationalPolynomial& p) {
  mpz_class l = 1;
  for (const auto& c : p.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  std::vector<mpz_class> out;
  mpz_class g = 0;
  for (const auto& c : p.coeffs()) {
    out.push_back(c.get_num() * (l / c.get_den()));
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), out.back().get_mpz_t());
  }
  if (g > 1)
    for (auto& v : out) v /= g;
  return out;
}

// Divides `p` by `f` as often as it goes exactly; returns the multiplicity.
std::size_t strip_factor(RationalPolynomial& p, const RationalPolynomial& f) {
  std::size_t mult = 0;
  while (p.degree() >= f.degree() && !p.is_zero()) {
    auto [q, r] = divmod(p, f);
    if (!r.is_zero()) break;
    p = std::move(q);
    ++mult;
  }
  return mult;
}

RationalPolynomial linear_factor(const Rational& root) { return RationalPolynomial({-root, 1}); }

RationalPolynomial quadratic_factor(const Rational& re, const Rational& im) {
  return RationalPolynomial({Rational(re * re + im * im), Rational(-2 * re), 1});
}

}  // namespace

RationalPolynomial::RationalPolynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
  while (!coeffs_.empty() && sgn(coeffs_.back()) == 0) coeffs_.pop_back();
}

Rational RationalPolynomial::operator()(const Rational& x) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::pair<RationalPolynomial, RationalPolynomial> divmod(const RationalPolynomial& a,
                                                         const RationalPolynomial& b) {
  if (b.is_zero()) throw Error(ErrorCode::kInvalidArgument, "polynomial division by zero");
  std::vector<Rational> rem = a.coeffs();
  if (rem.size() < b.coeffs().size()) return {RationalPolynomial(), a};
  const std::size_t db = b.degree();
  std::vector<Rational> quot(rem.size() - db);
  const Rational& lead = b.coeffs().back();
  for (std::size_t k = quot.size(); k-- > 0;) {
    const Rational c = rem[k + db] / lead;
    quot[k] = c;
    if (sgn(c) == 0) continue;
    for (std::size_t j = 0; j <= db; ++j) rem[k + j] -= c * b[j];
  }
  rem.resize(db);
  return {RationalPolynomial(std::move(quot)), RationalPolynomial(std::move(rem))};
}

RationalPolynomial characteristic_polynomial(const RationalMatrix& a) {
  if (!a.is_square()) throw Error(ErrorCode::kInvalidArgument, "characteristic polynomial needs a square matrix");
  const std::size_t n = a.rows();
  RationalMatrix h = a;

  // Similarity reduction to upper Hessenberg form.
  for (std::size_t j = 0; j + 2 < n; ++j) {
    std::size_t p = j + 1;
    while (p < n && sgn(h(p, j)) == 0) ++p;
    if (p == n) continue;
    if (p != j + 1) {
      for (std::size_t c = 0; c < n; ++c) std::swap(h(p, c), h(j + 1, c));
      for (std::size_t r = 0; r < n; ++r) std::swap(h(r, p), h(r, j + 1));
    }
    for (std::size_t k = j + 2; k < n; ++k) {
      if (sgn(h(k, j)) == 0) continue;
      const Rational t = h(k, j) / h(j + 1, j);
      for (std::size_t c = 0; c < n; ++c) h(k, c) -= t * h(j + 1, c);
      for (std::size_t r = 0; r < n; ++r) h(r, j + 1) += t * h(r, k);
    }
  }

  // p_m(x) = (x - h_mm) p_{m-1} - sum_{i<m} h_im (prod_{k=i+1..m} h_{k,k-1}) p_{i-1}
  std::vector<std::vector<Rational>> polys(n + 1);
  polys[0] = {1};
  for (std::size_t m = 1; m <= n; ++m) {
    std::vector<Rational> pm(m + 1, Rational(0));
    const auto& prev = polys[m - 1];
    for (std::size_t k = 0; k < prev.size(); ++k) {
      pm[k + 1] += prev[k];
      pm[k] -= h(m - 1, m - 1) * prev[k];
    }
    Rational sub = 1;
    for (std::size_t i = m - 1; i-- > 0;) {
      // i is the 0-based row index; the product runs over subdiagonal entries below it
      sub *= h(i + 1, i);
      if (sgn(sub) == 0) break;
      const Rational coef = h(i, m - 1) * sub;
      if (sgn(coef) == 0) continue;
      const auto& pi = polys[i];
      for (std::size_t k = 0; k < pi.size(); ++k) pm[k] -= coef * pi[k];
    }
    polys[m] = std::move(pm);
  }
  return RationalPolynomial(polys[n]);
}

std::optional<std::vector<CertifiedRoot>> certify_roots(const RationalPolynomial& p,
                                                        const std::vector<Complex>& estimates) {
  if (p.is_zero()) throw Error(ErrorCode::kInvalidArgument, "certify_roots: zero polynomial");
  RationalPolynomial rest = p;
  std::vector<CertifiedRoot> roots;
  auto try_real = [&](const Rational& r) {
    if (rest.degree() == 0) return;
    const std::size_t m = strip_factor(rest, linear_factor(r));
    if (m > 0) roots.push_back({GaussRational(r, 0), m});
  };
  auto try_pair = [&](const Rational& re, const Rational& im) {
    if (rest.degree() < 2 || sgn(im) <= 0) return;
    const std::size_t m = strip_factor(rest, quadratic_factor(re, im));
    if (m > 0) roots.push_back({GaussRational(re, im), m});
  };

  try_real(0);

  if (rest.degree() > 0) {
    const auto ints = integer_coefficients(rest);
    const mpz_class& a0 = ints.front();
    const mpz_class& an = ints.back();
    if (abs(a0) <= kDivisorSearchLimit && abs(an) <= kDivisorSearchLimit) {
      std::set<Rational> seen;
      for (const auto& q : positive_divisors(an)) {
        for (const auto& num : positive_divisors(a0)) {
          for (int s : {1, -1}) {
            const Rational cand(Rational(num, q) * s);
            if (!seen.insert(cand).second) continue;
            if (sgn(rest(cand)) == 0) try_real(cand);
            if (rest.degree() == 0) break;
          }
        }
      }
    }
  }

  for (const auto& z : estimates) {
    if (rest.degree() == 0) break;
    for (double rel : {1e-12, 1e-9, 1e-6, 1e-3}) {
      const double delta = rel * std::max(1.0, std::abs(z));
      const Rational re = simplest_rational_between(Rational(z.real() - delta), Rational(z.real() + delta));
      if (std::abs(z.imag()) <= delta) try_real(re);
      const double im_abs = std::abs(z.imag());
      if (im_abs > delta) {
        const Rational im = simplest_rational_between(Rational(im_abs - delta), Rational(im_abs + delta));
        try_pair(re, im);
      }
    }
  }

  if (rest.degree() > 0) return std::nullopt;

  std::sort(roots.begin(), roots.end(), [](const CertifiedRoot& a, const CertifiedRoot& b) {
    const bool ar = a.value.is_real();
    const bool br = b.value.is_real();
    if (ar != br) return ar;
    if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
    return a.value.imag() < b.value.imag();
  });
  return roots;
}

}  // namespace minctrl
