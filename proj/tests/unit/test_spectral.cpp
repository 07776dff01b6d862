#include <gtest/gtest.h>

#include <algorithm>

#include "corpus.hpp"
#include "minctrl/linalg.hpp"
#include "minctrl/polynomial.hpp"
#include "minctrl/spectral.hpp"

using namespace minctrl;

namespace {

RationalMatrix diag_jordan(const std::vector<std::pair<long, std::size_t>>& blocks) {
  std::vector<RationalMatrix> parts;
  for (const auto& [value, m] : blocks) parts.push_back(jordan_block(Rational(value), m));
  return block_diag(parts);
}

// Left eigenvector check: x^H A = lambda x^H.
template <class C>
double left_residual(const Matrix<C>& a, const C& lambda, const Matrix<C>& x) {
  return max_abs(Matrix<C>(x.adjoint() * a - x.adjoint() * lambda));
}

}  // namespace

TEST(EigenStructure, DiagonalDistinct) {
  const RationalMatrix a = RationalMatrix::diagonal({1, 2, 3});
  const auto e = compute_eigenstructure(a);
  ASSERT_EQ(e.groups.size(), 3u);
  EXPECT_EQ(e.k_r, 3u);
  EXPECT_EQ(e.k_c, 0u);
  EXPECT_EQ(e.p_max, 1u);
  for (std::size_t g = 0; g < 3; ++g) EXPECT_EQ(e.groups[g].value, GaussRational(Rational(long(g + 1))));
  const auto f = compute_eigenstructure(to_floating_real(a));
  ASSERT_EQ(f.groups.size(), 3u);
  EXPECT_EQ(f.p_max, 1u);
  EXPECT_NEAR(f.min_gap, 1.0, 1e-12);
}

TEST(EigenStructure, IdentityHasFullGeometricMultiplicity) {
  const auto e = compute_eigenstructure(RationalMatrix::identity(2));
  ASSERT_EQ(e.groups.size(), 1u);
  EXPECT_EQ(e.groups[0].algebraic_multiplicity, 2u);
  EXPECT_EQ(e.groups[0].geometric_multiplicity, 2u);
  EXPECT_EQ(e.p_max, 2u);
  const auto f = compute_eigenstructure(RealMatrix::identity(2));
  EXPECT_EQ(f.p_max, 2u);
}

TEST(EigenStructure, RotationGivesConjugatePair) {
  const RationalMatrix a{{0, -1}, {1, 0}};
  const auto e = compute_eigenstructure(a);
  EXPECT_EQ(e.k_r, 0u);
  EXPECT_EQ(e.k_c, 2u);
  ASSERT_EQ(e.groups.size(), 2u);
  EXPECT_EQ(e.groups[0].value, GaussRational(0, 1));
  EXPECT_EQ(e.groups[1].value, GaussRational(0, -1));
  EXPECT_TRUE(e.groups[0].representative);
  EXPECT_EQ(e.groups[0].conjugate_partner, 1u);
  EXPECT_EQ(e.groups[1].conjugate_partner, 0u);
  EXPECT_EQ(e.groups[1].left_basis, e.groups[0].left_basis.conjugate());
  // characteristic polynomial lambda^2 + 1
  EXPECT_EQ(characteristic_polynomial(a), RationalPolynomial({1, 0, 1}));

  const auto f = compute_eigenstructure(to_floating_real(a));
  ASSERT_EQ(f.groups.size(), 2u);
  EXPECT_NEAR(std::abs(f.groups[0].value - Complex(0, 1)), 0.0, 1e-12);
  EXPECT_EQ(f.groups[1].value, std::conj(f.groups[0].value));
}

TEST(EigenStructure, OrderingRealsThenPairsThenPartners) {
  // eigenvalues 2, -1, 1 +- 2i, -3 +- i
  Rng rng(9);
  const auto c = fixtures::make_case("mixed", {{2, 0, {1}}, {-1, 0, {1}}, {1, 2, {1}}, {-3, 1, {1}}}, rng);
  const auto e = compute_eigenstructure(c.a);
  ASSERT_EQ(e.groups.size(), 6u);
  EXPECT_EQ(e.k_r, 2u);
  EXPECT_EQ(e.k_c, 4u);
  EXPECT_EQ(e.groups[0].value, GaussRational(-1));
  EXPECT_EQ(e.groups[1].value, GaussRational(2));
  EXPECT_EQ(e.groups[2].value, GaussRational(-3, 1));
  EXPECT_EQ(e.groups[3].value, GaussRational(1, 2));
  EXPECT_EQ(e.groups[4].value, GaussRational(-3, -1));
  EXPECT_EQ(e.groups[5].value, GaussRational(1, -2));
  for (std::size_t i = 2; i < 4; ++i) EXPECT_EQ(*e.groups[i].conjugate_partner, i + 2);
}

TEST(EigenStructure, AmbiguousClusterSignalsGap) {
  // a chain of eigenvalues 0.9e-8 apart links into one cluster wider than 10x the merge distance
  ToleranceConfig tol;
  tol.eigen_cluster_tol = 1e-8;
  std::vector<double> d;
  for (int k = 0; k < 14; ++k) d.push_back(k * 0.9e-8);
  EXPECT_THROW(compute_eigenstructure(RealMatrix::diagonal(d), tol), SpectrumAmbiguityError);
}

TEST(EigenStructure, IrrationalSpectrumIsReported) {
  const RationalMatrix a{{0, 2}, {1, 0}};  // eigenvalues +- sqrt(2)
  EXPECT_THROW(compute_eigenstructure(a), IrrationalSpectrumError);
  const auto f = compute_eigenstructure(to_floating_real(a));
  EXPECT_EQ(f.groups.size(), 2u);
}

TEST(GeometricMultiplicity, Examples) {
  EXPECT_EQ(geometric_multiplicity(RationalMatrix::identity(3), GaussRational(1)), 3u);
  EXPECT_EQ(geometric_multiplicity(jordan_block(Rational(5), 2), GaussRational(5)), 1u);
  // diag(J2(1), J1(1)): A - I has a single nonzero entry, nullity 2
  EXPECT_EQ(geometric_multiplicity(diag_jordan({{1, 2}, {1, 1}}), GaussRational(1)), 2u);
  EXPECT_EQ(geometric_multiplicity(to_floating_real(diag_jordan({{1, 2}, {1, 1}})), Complex(1)), 2u);
  EXPECT_THROW(geometric_multiplicity(RationalMatrix::identity(3), GaussRational(2)), Error);
}

TEST(GeometricMultiplicity, LeftRightDuality) {
  for (const auto& c : fixtures::make_corpus(30, 77)) {
    const RationalMatrix at = c.a.transpose();
    for (const auto& g : compute_eigenstructure(c.a).groups) {
      EXPECT_EQ(geometric_multiplicity(c.a, g.value), geometric_multiplicity(at, conj(g.value)));
    }
  }
}

TEST(LeftEigenbasis, Examples) {
  const auto x = left_eigenbasis(RationalMatrix::diagonal({1, 2}), GaussRational(1));
  ASSERT_EQ(x.cols(), 1u);
  EXPECT_TRUE(is_exact_zero(x(1, 0)));
  EXPECT_FALSE(is_exact_zero(x(0, 0)));
  EXPECT_EQ(left_eigenbasis(RationalMatrix::identity(2), GaussRational(1)).cols(), 2u);

  const RationalMatrix rot{{0, -1}, {1, 0}};
  const auto xr = left_eigenbasis(rot, GaussRational(0, 1));
  ASSERT_EQ(xr.cols(), 1u);
  // proportional to (1, -i)
  EXPECT_EQ(xr(1, 0), xr(0, 0) * GaussRational(0, -1));
  EXPECT_EQ(left_residual(complexify(rot), GaussRational(0, 1), xr), 0.0);

  const auto xf = left_eigenbasis(to_floating_real(rot), Complex(0, 1));
  EXPECT_LT(left_residual(ComplexMatrix(to_floating(rot)), Complex(0, 1), xf), 1e-12);
}

TEST(BlockSizes, WeyrCharacteristic) {
  // nullities of N^k for blocks [3, 1]: 2, 3, 4
  EXPECT_EQ(block_sizes_from_nullities({0, 2, 3, 4}), (std::vector<std::size_t>{3, 1}));
  EXPECT_EQ(block_sizes_from_nullities({0, 2, 4}), (std::vector<std::size_t>{2, 2}));
  EXPECT_EQ(block_sizes_from_nullities({0, 3}), (std::vector<std::size_t>{1, 1, 1}));
}

TEST(JordanStructure, DiagonalIsTrivial) {
  const RationalMatrix a = RationalMatrix::diagonal({1, 2, 3});
  const auto js = jordan_structure<ExactBackend>(a, compute_eigenstructure(a));
  for (const auto& b : js.block_sizes) EXPECT_EQ(b, (std::vector<std::size_t>{1}));
  // T is a scaled permutation of the identity
  for (std::size_t j = 0; j < 3; ++j) {
    std::size_t nonzero = 0;
    for (std::size_t i = 0; i < 3; ++i) nonzero += is_exact_zero(js.transform(i, j)) ? 0 : 1;
    EXPECT_EQ(nonzero, 1u);
  }
}

TEST(JordanStructure, SingleBlockInJordanForm) {
  const RationalMatrix a = jordan_block(Rational(2), 3);
  const auto js = jordan_structure<ExactBackend>(a, compute_eigenstructure(a));
  ASSERT_EQ(js.block_sizes.size(), 1u);
  EXPECT_EQ(js.block_sizes[0], (std::vector<std::size_t>{3}));
  EXPECT_EQ(GaussMatrix(complexify(a) * js.transform), GaussMatrix(js.transform * js.jordan_matrix()));
}

TEST(JordanStructure, RecoversPrescribedBlocks) {
  Rng rng(5);
  const auto c = fixtures::make_case("[2,1]", {{1, 0, {2, 1}}}, rng);
  const auto js = jordan_structure<ExactBackend>(c.a, compute_eigenstructure(c.a));
  EXPECT_EQ(js.block_sizes[0], (std::vector<std::size_t>{2, 1}));
}

TEST(JordanStructure, CorpusInvariantsExact) {
  for (const auto& c : fixtures::make_corpus(90, 123)) {
    const auto e = compute_eigenstructure(c.a);
    const auto js = jordan_structure<ExactBackend>(c.a, e);
    std::size_t total = 0;
    const GaussMatrix ac = complexify(c.a);
    for (std::size_t g = 0; g < e.groups.size(); ++g) {
      const auto& grp = e.groups[g];
      total += grp.algebraic_multiplicity;
      EXPECT_EQ(js.block_sizes[g].size(), grp.geometric_multiplicity);
      EXPECT_EQ(js.group_size(g), grp.algebraic_multiplicity);
      EXPECT_TRUE(std::is_sorted(js.block_sizes[g].rbegin(), js.block_sizes[g].rend()));
      for (std::size_t j = 0; j < js.chains[g].size(); ++j) {
        const auto& t = js.chains[g][j];
        EXPECT_EQ(GaussMatrix(ac * t), GaussMatrix(t * jordan_block(grp.value, t.cols())));
        if (grp.kind == EigenKind::kReal) {
          EXPECT_EQ(max_imag(t), 0.0);
        }
      }
      if (grp.conjugate_partner && grp.representative) {
        for (std::size_t j = 0; j < js.chains[g].size(); ++j)
          EXPECT_EQ(js.chains[*grp.conjugate_partner][j], js.chains[g][j].conjugate());
      }
      // Weyr identity: #{blocks >= k} = rank(N^{k-1}) - rank(N^k)
      GaussMatrix nmat = ac;
      for (std::size_t i = 0; i < c.n; ++i) nmat(i, i) -= grp.value;
      GaussMatrix power = GaussMatrix::identity(c.n);
      for (std::size_t k = 1; k <= grp.algebraic_multiplicity; ++k) {
        const std::size_t before = rank(power);
        power = power * nmat;
        const auto count = static_cast<std::size_t>(
            std::count_if(js.block_sizes[g].begin(), js.block_sizes[g].end(), [&](std::size_t m) { return m >= k; }));
        EXPECT_EQ(count, before - rank(power));
      }
    }
    EXPECT_EQ(total, c.n);
    EXPECT_EQ(e.k_c % 2, 0u);
    EXPECT_EQ(GaussMatrix(js.transform * js.transform_inverse), GaussMatrix::identity(c.n));
    EXPECT_EQ(GaussMatrix(js.transform_inverse * ac * js.transform), js.jordan_matrix());
  }
}

TEST(JordanStructure, FloatingRoundTripWithCertifiedEigenvalues) {
  for (const auto& c : fixtures::make_corpus(60, 321)) {
    const RealMatrix af = to_floating_real(c.a);
    const auto e = to_floating(compute_eigenstructure(c.a));
    const auto js = jordan_structure<FloatBackend>(af, e);
    const ComplexMatrix ac = complexify(af);
    const double err = max_abs(ComplexMatrix(js.transform_inverse * ac * js.transform - js.jordan_matrix()));
    EXPECT_LE(err, 1e-8 * std::max(1.0, frobenius_norm(af))) << c.pattern;
    for (std::size_t g = 0; g < e.groups.size(); ++g)
      for (std::size_t i = 0; i < e.groups[g].left_basis.cols(); ++i)
        EXPECT_LT(left_residual(ac, e.groups[g].value, e.groups[g].left_basis.col(i)),
                  1e-10 * std::max(1.0, frobenius_norm(af)));
  }
}

TEST(JordanStructure, FloatingDistinctSpectrum) {
  Rng rng(8);
  const auto c = fixtures::make_case("distinct", {{1, 0, {1}}, {-2, 0, {1}}, {0, 3, {1}}}, rng);
  const RealMatrix af = to_floating_real(c.a);
  const auto js = jordan_structure<FloatBackend>(af, compute_eigenstructure(af));
  EXPECT_EQ(js.eigen.p_max, 1u);
  EXPECT_LT(max_abs(ComplexMatrix(js.transform * js.transform_inverse - ComplexMatrix::identity(4))), 1e-8);
}
