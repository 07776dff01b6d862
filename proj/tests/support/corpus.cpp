#include "corpus.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "minctrl/linalg.hpp"

namespace minctrl::fixtures {
namespace {

std::size_t spec_dimension(const std::vector<EigenSpec>& spec) {
  std::size_t n = 0;
  for (const auto& e : spec)
    for (auto m : e.blocks) n += e.im > 0 ? 2 * m : m;
  return n;
}

class ValuePool {
 public:
  explicit ValuePool(Rng& rng) : rng_(rng) {}

  long real() {
    for (;;) {
      const long v = rng_.between(-6, 6);
      if (reals_.insert(v).second) return v;
    }
  }

  std::pair<long, long> pair() {
    for (;;) {
      const long re = rng_.between(-3, 3);
      const long im = rng_.between(1, 3);
      if (pairs_.insert({re, im}).second) return {re, im};
    }
  }

 private:
  Rng& rng_;
  std::set<long> reals_;
  std::set<std::pair<long, long>> pairs_;
};

}  // namespace

RationalMatrix real_jordan_form(const std::vector<EigenSpec>& spec) {
  const std::size_t n = spec_dimension(spec);
  RationalMatrix j(n, n);
  std::size_t at = 0;
  for (const auto& e : spec) {
    for (auto m : e.blocks) {
      if (e.im == 0) {
        for (std::size_t k = 0; k < m; ++k) {
          j(at + k, at + k) = Rational(e.re);
          if (k + 1 < m) j(at + k, at + k + 1) = 1;
        }
        at += m;
      } else {
        for (std::size_t k = 0; k < m; ++k) {
          const std::size_t r = at + 2 * k;
          j(r, r) = Rational(e.re);
          j(r, r + 1) = Rational(-e.im);
          j(r + 1, r) = Rational(e.im);
          j(r + 1, r + 1) = Rational(e.re);
          if (k + 1 < m) {
            j(r, r + 2) = 1;
            j(r + 1, r + 3) = 1;
          }
        }
        at += 2 * m;
      }
    }
  }
  return j;
}

RationalMatrix random_unimodular(std::size_t n, Rng& rng) {
  RationalMatrix l = RationalMatrix::identity(n);
  RationalMatrix u = RationalMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < i; ++k) {
      l(i, k) = Rational(rng.between(-1, 1));
      u(k, i) = Rational(rng.between(-1, 1));
    }
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
  RationalMatrix p(n, n);
  for (std::size_t i = 0; i < n; ++i) p(i, perm[i]) = 1;
  return p * l * u;
}

CorpusCase make_case(const std::string& pattern, const std::vector<EigenSpec>& spec, Rng& rng) {
  CorpusCase c;
  c.pattern = pattern;
  c.spec = spec;
  c.jordan = real_jordan_form(spec);
  c.n = c.jordan.rows();
  c.p = random_unimodular(c.n, rng);
  c.a = c.p * c.jordan * inverse(c.p);
  for (const auto& e : spec) {
    c.expected_p_max = std::max(c.expected_p_max, e.blocks.size());
    c.has_complex = c.has_complex || e.im > 0;
  }
  return c;
}

std::vector<CorpusCase> make_corpus(std::size_t count, std::uint64_t seed) {
  static const std::vector<std::string> kPatterns = {"[1...]", "[2]", "[2,1]", "[3,1]", "[2,2]", "complex"};
  std::vector<CorpusCase> out;
  for (std::size_t idx = 0; idx < count; ++idx) {
    Rng rng(derive_seed(seed, idx));
    ValuePool pool(rng);
    const std::string& pattern = kPatterns[idx % kPatterns.size()];
    std::vector<EigenSpec> spec;
    if (pattern == "[1...]") {
      const auto k = static_cast<std::size_t>(rng.between(2, 8));
      for (std::size_t i = 0; i < k; ++i) spec.push_back({pool.real(), 0, {1}});
    } else if (pattern == "complex") {
      static const std::vector<std::vector<std::size_t>> kPairBlocks = {{1}, {2}, {1, 1}};
      const auto [re, im] = pool.pair();
      spec.push_back({re, im, kPairBlocks[rng.below(kPairBlocks.size())]});
      if (spec_dimension(spec) <= 6 && rng.coin()) {
        const auto [re2, im2] = pool.pair();
        spec.push_back({re2, im2, {1}});
      }
    } else {
      std::vector<std::size_t> blocks;
      if (pattern == "[2]") blocks = {2};
      if (pattern == "[2,1]") blocks = {2, 1};
      if (pattern == "[3,1]") blocks = {3, 1};
      if (pattern == "[2,2]") blocks = {2, 2};
      spec.push_back({pool.real(), 0, blocks});
    }
    if (pattern != "[1...]") {
      if (spec_dimension(spec) + 2 <= 8 && rng.below(3) == 0) spec.push_back({pool.real(), 0, {1, 1}});
      const std::size_t room = 8 - spec_dimension(spec);
      const auto extra = static_cast<std::size_t>(rng.between(0, static_cast<std::int64_t>(std::min<std::size_t>(room, 3))));
      for (std::size_t i = 0; i < extra; ++i) spec.push_back({pool.real(), 0, {1}});
    }
    out.push_back(make_case(pattern, spec, rng));
  }
  return out;
}

std::vector<CorpusCase> make_complex_corpus(std::size_t count, std::uint64_t seed) {
  static const std::vector<std::vector<std::size_t>> kPairBlocks = {{1}, {1}, {2}, {1, 1}};
  std::vector<CorpusCase> out;
  for (std::size_t idx = 0; idx < count; ++idx) {
    Rng rng(derive_seed(seed, idx));
    ValuePool pool(rng);
    std::vector<EigenSpec> spec;
    const auto [re, im] = pool.pair();
    spec.push_back({re, im, kPairBlocks[rng.below(kPairBlocks.size())]});
    while (spec_dimension(spec) + 2 <= 8 && rng.below(3) == 0) {
      const auto [r2, i2] = pool.pair();
      spec.push_back({r2, i2, {1}});
    }
    const std::size_t room = 8 - spec_dimension(spec);
    const auto extra = static_cast<std::size_t>(rng.between(0, static_cast<std::int64_t>(std::min<std::size_t>(room, 3))));
    for (std::size_t i = 0; i < extra; ++i) spec.push_back({pool.real(), 0, {1}});
    out.push_back(make_case("complex", spec, rng));
  }
  return out;
}

RationalMatrix random_integer_matrix(std::size_t rows, std::size_t cols, long range, Rng& rng) {
  RationalMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = Rational(rng.between(-range, range));
  return m;
}

}  // namespace minctrl::fixtures
