#include <gtest/gtest.h>

#include "corpus.hpp"
#include "minctrl/linalg.hpp"
#include "minctrl/verify.hpp"

using namespace minctrl;

namespace {

Rational det3(const RationalMatrix& m) {
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

// w^H A = lambda w^H and w^H B = 0, with w nonzero.
template <class C, class R>
bool is_left_witness(const Matrix<R>& a, const Matrix<R>& b, const C& lambda, const Matrix<C>& w, double tol) {
  const Matrix<C> wh = w.adjoint();
  const Matrix<C> ac = complexify(a);
  const Matrix<C> bc = complexify(b);
  return max_abs(w) > tol && max_abs(Matrix<C>(wh * ac - wh * lambda)) <= tol &&
         max_abs(Matrix<C>(wh * bc)) <= tol;
}

RationalMatrix random_input(std::size_t n, std::size_t m, Rng& rng) {
  return fixtures::random_integer_matrix(n, m, 2, rng);
}

}  // namespace

TEST(Pbh, SingleJordanBlockWithLastUnitInput) {
  const RationalMatrix a = jordan_block(Rational(0), 2);
  const RationalMatrix b{{0}, {1}};
  const auto r = pbh_controllable(a, b);
  EXPECT_EQ(r.verdict, Verdict::kControllable);
  EXPECT_TRUE(r.witnesses.empty());
  ASSERT_EQ(r.ranks.size(), 1u);
  EXPECT_EQ(r.ranks[0].pencil_rank, 2u);
  EXPECT_EQ(r.kalman.rank, 2u);
  EXPECT_EQ(pbh_controllable(to_floating_real(a), to_floating_real(b)).verdict, Verdict::kControllable);

  const RationalMatrix e1{{1}, {0}};
  EXPECT_EQ(pbh_controllable(a, e1).verdict, Verdict::kUncontrollable);
  EXPECT_EQ(kalman_rank(a, e1).rank, 1u);
}

TEST(Pbh, IdentityWithSingleInputFails) {
  const RationalMatrix a = RationalMatrix::identity(2);
  const RationalMatrix b{{1}, {1}};
  const auto r = pbh_controllable(a, b);
  EXPECT_EQ(r.verdict, Verdict::kUncontrollable);
  ASSERT_EQ(r.witnesses.size(), 1u);
  const auto& w = r.witnesses[0].vector;
  EXPECT_EQ(w(0, 0), -w(1, 0));
  EXPECT_FALSE(is_exact_zero(w(0, 0)));
  EXPECT_EQ(r.ranks[0].pencil_rank, 1u);
  EXPECT_EQ(r.ranks[0].eigenvector_rank, 1u);
  EXPECT_EQ(r.lemma2, std::vector<bool>{false});

  const auto f = pbh_controllable(to_floating_real(a), to_floating_real(b));
  EXPECT_EQ(f.verdict, Verdict::kUncontrollable);
  ASSERT_EQ(f.witnesses.size(), 1u);
  EXPECT_NEAR(std::abs(f.witnesses[0].vector(0, 0) + f.witnesses[0].vector(1, 0)), 0.0, 1e-12);
}

TEST(Pbh, RepeatedEigenvalueNeedsTwoInputs) {
  const RationalMatrix a = RationalMatrix::diagonal({1, 1, 2});
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    const auto b = random_input(3, 1, rng);
    EXPECT_EQ(pbh_controllable(a, b).verdict, Verdict::kUncontrollable);
    EXPECT_LE(kalman_rank(a, b).rank, 2u);
  }
  const RationalMatrix b2{{1, 0}, {0, 1}, {1, 1}};
  EXPECT_EQ(pbh_controllable(a, b2).verdict, Verdict::kControllable);
}

TEST(Pbh, RotationWithOneInput) {
  const RationalMatrix a{{0, -1}, {1, 0}};
  const auto r = pbh_controllable(a, RationalMatrix{{1}, {0}});
  EXPECT_EQ(r.verdict, Verdict::kControllable);
  EXPECT_EQ(r.ranks.size(), 2u);
  EXPECT_EQ(pbh_controllable(a, RationalMatrix{{0}, {0}}).verdict, Verdict::kUncontrollable);
}

TEST(Kalman, Examples) {
  EXPECT_EQ(kalman_rank(RationalMatrix::diagonal({1, 2, 3}), RationalMatrix{{1}, {1}, {1}}).rank, 3u);
  EXPECT_EQ(kalman_rank(RationalMatrix::diagonal({1, 2, 3}), RationalMatrix{{1}, {0}, {1}}).rank, 2u);
  const auto f = kalman_rank(RealMatrix::diagonal({1, 2, 3}), RealMatrix{{1}, {1}, {1}});
  EXPECT_EQ(f.rank, 3u);
  EXPECT_FALSE(f.near_threshold);
  EXPECT_EQ(kalman_rank(RealMatrix(3, 3), RealMatrix(3, 1)).rank, 0u);
}

TEST(Kalman, NearThresholdFlag) {
  ToleranceConfig tol;
  tol.rank_tol = 1e-9;
  // a tiny second singular value sitting next to the cutoff
  const auto k = kalman_rank(RealMatrix::diagonal({1.0, 1.0 + 2e-9}), RealMatrix{{1.0}, {1.0}}, tol);
  EXPECT_TRUE(k.near_threshold);
}

TEST(Kalman, VandermondeDeterminantSign) {
  const std::vector<Rational> lambda{1, 2, 3};
  const RationalMatrix a = RationalMatrix::diagonal(lambda);
  const RationalMatrix b{{1}, {1}, {1}};
  const Rational got = det3(controllability_matrix(a, b));
  EXPECT_EQ(got, 2);
  EXPECT_EQ(vandermonde_det_oracle<Rational>(lambda, {1, 1, 1}, Rational(1)), got);
  EXPECT_EQ(vandermonde_det_oracle<Rational>({1, 1, 3}, {1, 1, 1}, Rational(1)), 0);
  EXPECT_EQ(det3(controllability_matrix(RationalMatrix::diagonal({1, 1, 3}), b)), 0);
}

TEST(Kalman, VandermondeMatchesUnderSimilarity) {
  Rng rng(99);
  for (int t = 0; t < 30; ++t) {
    const RationalMatrix tm = fixtures::random_unimodular(3, rng);
    const RationalMatrix ti = inverse(tm);
    std::vector<Rational> lambda;
    for (long v : {rng.between(-5, 5), rng.between(-5, 5), rng.between(-5, 5)}) lambda.emplace_back(v);
    std::vector<Rational> bhat;
    for (int i = 0; i < 3; ++i) bhat.emplace_back(rng.between(-3, 3));
    RationalMatrix bh(3, 1);
    for (int i = 0; i < 3; ++i) bh(i, 0) = bhat[i];
    const RationalMatrix a = ti * RationalMatrix::diagonal(lambda) * tm;
    const RationalMatrix b = ti * bh;
    EXPECT_EQ(det3(controllability_matrix(a, b)), vandermonde_det_oracle(lambda, bhat, det(ti)));
  }
}

TEST(Observability, Examples) {
  const RationalMatrix a = jordan_block(Rational(0), 2);
  EXPECT_EQ(pbh_observable(a, RationalMatrix{{1, 0}}).verdict, Verdict::kObservable);
  const auto r = pbh_observable(a, RationalMatrix{{0, 1}});
  EXPECT_EQ(r.verdict, Verdict::kUnobservable);
  ASSERT_EQ(r.witnesses.size(), 1u);
  // right eigenvector of J2(0) is e1
  EXPECT_TRUE(is_exact_zero(r.witnesses[0].vector(1, 0)));
  EXPECT_EQ(pbh_observable(RationalMatrix::identity(2), RationalMatrix{{1, 1}}).verdict, Verdict::kUnobservable);
  EXPECT_EQ(pbh_observable(to_floating_real(a), RealMatrix{{1.0, 0.0}}).verdict, Verdict::kObservable);
}

TEST(Observability, DualOfControllability) {
  Rng rng(2024);
  const auto corpus = fixtures::make_corpus(100, 555);
  std::size_t positives = 0;
  for (const auto& c : corpus) {
    const auto m = static_cast<std::size_t>(rng.between(1, 2));
    const auto b = random_input(c.n, m, rng);
    const auto ctrb = pbh_controllable(c.a, b);
    const auto obsv = pbh_observable(RationalMatrix(c.a.transpose()), RationalMatrix(b.transpose()));
    EXPECT_EQ(ctrb.affirmative(), obsv.affirmative()) << c.pattern;
    EXPECT_EQ(ctrb.kalman.rank, obsv.kalman.rank);
    positives += ctrb.affirmative() ? 1 : 0;
  }
  EXPECT_GT(positives, 0u);
  EXPECT_LT(positives, corpus.size());
}

TEST(Witness, AnnihilatesInputOnCorpus) {
  Rng rng(8);
  std::size_t checked = 0;
  for (const auto& c : fixtures::make_corpus(60, 31)) {
    const auto b = random_input(c.n, 1, rng);
    const auto r = pbh_controllable(c.a, b);
    EXPECT_EQ(r.affirmative(), r.kalman.rank == c.n) << c.pattern;
    for (const auto& w : r.witnesses) {
      EXPECT_TRUE(is_left_witness(c.a, b, w.eigenvalue, w.vector, 0.0));
      ++checked;
    }
    // defective spectra split under floating eigensolvers, so reuse the exact eigenvalues
    const RealMatrix af = to_floating_real(c.a);
    const RealMatrix bf = to_floating_real(b);
    const auto f = pbh_controllable<FloatBackend>(af, bf, to_floating(compute_eigenstructure(c.a)));
    EXPECT_EQ(f.verdict, r.verdict) << c.pattern;
    for (const auto& w : f.witnesses) EXPECT_TRUE(is_left_witness(af, bf, w.eigenvalue, w.vector, 1e-8));
  }
  EXPECT_GT(checked, 0u);
}

TEST(Witness, VerdictInvariantUnderSimilarity) {
  Rng rng(12);
  for (const auto& c : fixtures::make_corpus(40, 64)) {
    const auto b = random_input(c.n, 1 + rng.below(2), rng);
    const RationalMatrix s = fixtures::random_unimodular(c.n, rng);
    const RationalMatrix si = inverse(s);
    const auto lhs = pbh_controllable(c.a, b);
    const auto rhs = pbh_controllable(RationalMatrix(si * c.a * s), RationalMatrix(si * b));
    EXPECT_EQ(lhs.verdict, rhs.verdict);
    EXPECT_EQ(lhs.kalman.rank, rhs.kalman.rank);
  }
}

TEST(Shapes, Rejected) {
  EXPECT_THROW(pbh_controllable(RationalMatrix(2, 3), RationalMatrix(2, 1)), Error);
  EXPECT_THROW(pbh_controllable(RationalMatrix::identity(2), RationalMatrix(3, 1)), Error);
  EXPECT_THROW(pbh_observable(RationalMatrix::identity(2), RationalMatrix(1, 3)), Error);
}
