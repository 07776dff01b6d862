#include "minctrl/linalg.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace minctrl {
namespace {

template <class T>
using EigenMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

template <class T>
EigenMat<T> to_eigen(const Matrix<T>& m) {
  EigenMat<T> e(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
  return e;
}

template <class T>
Matrix<T> from_eigen(const EigenMat<T>& e) {
  Matrix<T> m(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    for (Eigen::Index j = 0; j < e.cols(); ++j) m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = e(i, j);
  return m;
}

// ---------------------------------------------------------------------------
// Floating kernels

template <class T>
std::size_t numerical_rank(const Eigen::VectorXd& sv, double rank_tol) {
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double cutoff = rank_tol * sv(0);
  std::size_t r = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    if (sv(k) > cutoff) ++r;
  return r;
}

template <class T>
std::size_t float_rank(const Matrix<T>& m, const ToleranceConfig& tol) {
  if (m.empty()) return 0;
  Eigen::JacobiSVD<EigenMat<T>> svd(to_eigen(m));
  return numerical_rank<T>(svd.singularValues(), tol.rank_tol);
}

template <class T>
Matrix<T> float_null_space(const Matrix<T>& m, const ToleranceConfig& tol) {
  const std::size_t n = m.cols();
  if (m.rows() == 0 || n == 0) return Matrix<T>::identity(n);
  Eigen::JacobiSVD<EigenMat<T>> svd(to_eigen(m), Eigen::ComputeFullV);
  const std::size_t r = numerical_rank<T>(svd.singularValues(), tol.rank_tol);
  const EigenMat<T> v = svd.matrixV();
  return from_eigen<T>(v.rightCols(static_cast<Eigen::Index>(n - r)));
}

template <class T>
Matrix<T> float_solve(const Matrix<T>& m, const Matrix<T>& rhs, const ToleranceConfig& tol) {
  if (m.rows() != rhs.rows()) {
    throw Error(ErrorCode::kInvalidArgument, "solve_linear: row mismatch between matrix and rhs");
  }
  if (m.empty()) return Matrix<T>(m.cols(), rhs.cols());
  const EigenMat<T> a = to_eigen(m);
  const EigenMat<T> b = to_eigen(rhs);
  Eigen::JacobiSVD<EigenMat<T>> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const std::size_t r = numerical_rank<T>(sv, tol.rank_tol);
  EigenMat<T> x = EigenMat<T>::Zero(a.cols(), b.cols());
  if (r > 0) {
    const auto ri = static_cast<Eigen::Index>(r);
    const EigenMat<T> ub = svd.matrixU().leftCols(ri).adjoint() * b;
    EigenMat<T> scaled = ub;
    for (Eigen::Index k = 0; k < ri; ++k) scaled.row(k) /= sv(k);
    x = svd.matrixV().leftCols(ri) * scaled;
  }
  const double residual = (a * x - b).norm();
  const double scale = a.norm() * x.norm() + b.norm();
  if (residual > std::sqrt(tol.rank_tol) * scale && residual > 0.0) {
    throw NoSolutionError("solve_linear: inconsistent system (residual " + to_string(residual) + ")",
                          residual);
  }
  return from_eigen<T>(x);
}

template <class T>
T float_det(const Matrix<T>& m) {
  if (!m.is_square()) throw Error(ErrorCode::kInvalidArgument, "det: matrix is not square");
  if (m.rows() == 0) return T(1);
  return Eigen::PartialPivLU<EigenMat<T>>(to_eigen(m)).determinant();
}

template <class T>
Matrix<T> float_inverse(const Matrix<T>& m, const ToleranceConfig& tol) {
  if (!m.is_square()) throw Error(ErrorCode::kInvalidArgument, "inverse: matrix is not square");
  if (float_rank(m, tol) < m.rows()) {
    throw Error(ErrorCode::kInvalidArgument, "inverse: matrix is numerically singular");
  }
  return from_eigen<T>(Eigen::PartialPivLU<EigenMat<T>>(to_eigen(m)).inverse());
}

template <class T>
Matrix<T> float_complement(const Matrix<T>& existing, const Matrix<T>& candidates, std::size_t count,
                           const ToleranceConfig& tol) {
  const std::size_t n = candidates.rows();
  if (count == 0) return Matrix<T>(n, 0);
  EigenMat<T> c = to_eigen(candidates);
  if (existing.cols() > 0) {
    Eigen::JacobiSVD<EigenMat<T>> svd(to_eigen(existing), Eigen::ComputeThinU);
    const auto r = static_cast<Eigen::Index>(numerical_rank<T>(svd.singularValues(), tol.rank_tol));
    const EigenMat<T> q = svd.matrixU().leftCols(r);
    c -= q * (q.adjoint() * c);
  }
  Eigen::JacobiSVD<EigenMat<T>> svd(c, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double scale = std::max(1.0, candidates.empty() ? 0.0 : to_eigen(candidates).norm());
  const double cutoff = 1e2 * tol.rank_tol * scale;
  if (static_cast<std::size_t>(sv.size()) < count || sv(static_cast<Eigen::Index>(count - 1)) <= cutoff) {
    throw Error(ErrorCode::kDefectiveStructure,
                "complement_directions: fewer than " + std::to_string(count) + " independent directions");
  }
  return from_eigen<T>(svd.matrixU().leftCols(static_cast<Eigen::Index>(count)));
}

template <class T>
std::vector<double> float_singular_values(const Matrix<T>& m) {
  if (m.empty()) return {};
  Eigen::JacobiSVD<EigenMat<T>> svd(to_eigen(m));
  const auto& sv = svd.singularValues();
  return {sv.data(), sv.data() + sv.size()};
}

// ---------------------------------------------------------------------------
// Exact kernels

template <class F>
EchelonForm<F> exact_rref(const Matrix<F>& input) {
  Matrix<F> m = input;
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && is_exact_zero(m(p, c))) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    const F inv = F(1) / m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || is_exact_zero(m(i, c))) continue;
      const F factor = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= factor * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(m), std::move(pivots)};
}

template <class F>
Matrix<F> exact_null_space(const Matrix<F>& m) {
  const std::size_t n = m.cols();
  if (m.rows() == 0) return Matrix<F>::identity(n);
  const auto ech = exact_rref(m);
  std::vector<bool> is_pivot(n, false);
  for (auto c : ech.pivot_cols) is_pivot[c] = true;
  Matrix<F> basis(n, n - ech.pivot_cols.size());
  std::size_t k = 0;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    basis(f, k) = F(1);
    for (std::size_t i = 0; i < ech.pivot_cols.size(); ++i) basis(ech.pivot_cols[i], k) = -ech.reduced(i, f);
    ++k;
  }
  return basis;
}

template <class F>
Matrix<F> exact_solve(const Matrix<F>& m, const Matrix<F>& rhs) {
  if (m.rows() != rhs.rows()) {
    throw Error(ErrorCode::kInvalidArgument, "solve_linear: row mismatch between matrix and rhs");
  }
  // Minimum-norm solution x = M^H y with (M M^H) y = rhs; range(M M^H) = range(M).
  const Matrix<F> mh = m.adjoint();
  const Matrix<F> gram = m * mh;
  const auto ech = exact_rref(hcat(gram, rhs));
  const std::size_t g = gram.cols();
  std::size_t gram_pivots = 0;
  for (auto c : ech.pivot_cols)
    if (c < g) ++gram_pivots;
  if (gram_pivots != ech.pivot_cols.size()) {
    double residual = 0.0;
    try {
      (void)solve_linear(to_floating(m), to_floating(rhs), ToleranceConfig{0, 0, 0});
    } catch (const NoSolutionError& e) {
      residual = e.residual();
    }
    throw NoSolutionError("solve_linear: inconsistent system (exact)", residual);
  }
  Matrix<F> y(g, rhs.cols());
  for (std::size_t i = 0; i < gram_pivots; ++i)
    for (std::size_t j = 0; j < rhs.cols(); ++j) y(ech.pivot_cols[i], j) = ech.reduced(i, g + j);
  return mh * y;
}

template <class F>
Matrix<F> exact_inverse(const Matrix<F>& m) {
  if (!m.is_square()) throw Error(ErrorCode::kInvalidArgument, "inverse: matrix is not square");
  const std::size_t n = m.rows();
  const auto ech = exact_rref(hcat(m, Matrix<F>::identity(n)));
  if (ech.pivot_cols.size() < n || (n > 0 && ech.pivot_cols[n - 1] != n - 1)) {
    throw Error(ErrorCode::kInvalidArgument, "inverse: matrix is singular");
  }
  return ech.reduced.block(0, n, n, n);
}

template <class F>
F exact_elimination_det(const Matrix<F>& input) {
  if (!input.is_square()) throw Error(ErrorCode::kInvalidArgument, "det: matrix is not square");
  Matrix<F> m = input;
  const std::size_t n = m.rows();
  F d(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && is_exact_zero(m(p, c))) ++p;
    if (p == n) return F(0);
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      d = -d;
    }
    d *= m(c, c);
    const F inv = F(1) / m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (is_exact_zero(m(i, c))) continue;
      const F factor = m(i, c) * inv;
      for (std::size_t j = c; j < n; ++j) m(i, j) -= factor * m(c, j);
    }
  }
  return d;
}

template <class F>
std::size_t exact_rank(const Matrix<F>& m);

template <>
std::size_t exact_rank(const RationalMatrix& m) {
  return bareiss(m).rank;
}

template <>
std::size_t exact_rank(const GaussMatrix& m) {
  return exact_rref(m).pivot_cols.size();
}

template <class F>
Matrix<F> exact_complement(const Matrix<F>& existing, const Matrix<F>& candidates, std::size_t count) {
  const std::size_t n = candidates.rows();
  Matrix<F> base = existing.cols() > 0 ? existing : Matrix<F>(n, 0);
  std::size_t base_rank = exact_rank(base);
  Matrix<F> picked(n, 0);
  for (std::size_t j = 0; j < candidates.cols() && picked.cols() < count; ++j) {
    const Matrix<F> c = candidates.col(j);
    Matrix<F> trial = hcat(base, c);
    const std::size_t r = exact_rank(trial);
    if (r > base_rank) {
      base = std::move(trial);
      base_rank = r;
      picked = hcat(picked, c);
    }
  }
  if (picked.cols() < count) {
    throw Error(ErrorCode::kDefectiveStructure,
                "complement_directions: fewer than " + std::to_string(count) + " independent directions");
  }
  return picked;
}

}  // namespace

BareissResult bareiss(const RationalMatrix& input) {
  const std::size_t rows = input.rows();
  const std::size_t cols = input.cols();
  std::vector<mpz_class> m(rows * cols);
  Rational scale_product = 1;
  for (std::size_t i = 0; i < rows; ++i) {
    mpz_class l = 1;
    for (std::size_t j = 0; j < cols; ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), input(i, j).get_den_mpz_t());
    scale_product *= Rational(l);
    for (std::size_t j = 0; j < cols; ++j) {
      m[i * cols + j] = input(i, j).get_num() * (l / input(i, j).get_den());
    }
  }
  auto at = [&](std::size_t i, std::size_t j) -> mpz_class& { return m[i * cols + j]; };

  mpz_class prev = 1;
  int sign = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && sgn(at(p, c)) == 0) ++p;
    if (p == rows) continue;
    if (p != r) {
      for (std::size_t j = 0; j < cols; ++j) std::swap(at(p, j), at(r, j));
      sign = -sign;
    }
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        mpz_class v = at(r, c) * at(i, j) - at(i, c) * at(r, j);
        mpz_divexact(at(i, j).get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
      }
      at(i, c) = 0;
    }
    prev = at(r, c);
    ++r;
  }

  BareissResult out;
  out.rank = r;
  if (rows == cols && r == rows) {
    out.determinant = rows == 0 ? Rational(1) : Rational(Rational(prev) * sign / scale_product);
  }
  return out;
}

EchelonForm<Rational> rref(const RationalMatrix& m) { return exact_rref(m); }
EchelonForm<GaussRational> rref(const GaussMatrix& m) { return exact_rref(m); }

std::size_t rank(const RealMatrix& m, const ToleranceConfig& tol) { return float_rank(m, tol); }
std::size_t rank(const ComplexMatrix& m, const ToleranceConfig& tol) { return float_rank(m, tol); }
std::size_t rank(const RationalMatrix& m, const ToleranceConfig&) { return exact_rank(m); }
std::size_t rank(const GaussMatrix& m, const ToleranceConfig&) { return exact_rank(m); }

RealMatrix null_space_basis(const RealMatrix& m, const ToleranceConfig& tol) { return float_null_space(m, tol); }
ComplexMatrix null_space_basis(const ComplexMatrix& m, const ToleranceConfig& tol) {
  return float_null_space(m, tol);
}
RationalMatrix null_space_basis(const RationalMatrix& m, const ToleranceConfig&) { return exact_null_space(m); }
GaussMatrix null_space_basis(const GaussMatrix& m, const ToleranceConfig&) { return exact_null_space(m); }

double det(const RealMatrix& m) { return float_det(m); }
Complex det(const ComplexMatrix& m) { return float_det(m); }
Rational det(const RationalMatrix& m) {
  if (!m.is_square()) throw Error(ErrorCode::kInvalidArgument, "det: matrix is not square");
  return bareiss(m).determinant;
}
GaussRational det(const GaussMatrix& m) { return exact_elimination_det(m); }

RealMatrix solve_linear(const RealMatrix& m, const RealMatrix& rhs, const ToleranceConfig& tol) {
  return float_solve(m, rhs, tol);
}
ComplexMatrix solve_linear(const ComplexMatrix& m, const ComplexMatrix& rhs, const ToleranceConfig& tol) {
  return float_solve(m, rhs, tol);
}
RationalMatrix solve_linear(const RationalMatrix& m, const RationalMatrix& rhs, const ToleranceConfig&) {
  return exact_solve(m, rhs);
}
GaussMatrix solve_linear(const GaussMatrix& m, const GaussMatrix& rhs, const ToleranceConfig&) {
  return exact_solve(m, rhs);
}

RealMatrix inverse(const RealMatrix& m, const ToleranceConfig& tol) { return float_inverse(m, tol); }
ComplexMatrix inverse(const ComplexMatrix& m, const ToleranceConfig& tol) { return float_inverse(m, tol); }
RationalMatrix inverse(const RationalMatrix& m, const ToleranceConfig&) { return exact_inverse(m); }
GaussMatrix inverse(const GaussMatrix& m, const ToleranceConfig&) { return exact_inverse(m); }

RealMatrix complement_directions(const RealMatrix& existing, const RealMatrix& candidates, std::size_t count,
                                 const ToleranceConfig& tol) {
  return float_complement(existing, candidates, count, tol);
}
ComplexMatrix complement_directions(const ComplexMatrix& existing, const ComplexMatrix& candidates,
                                    std::size_t count, const ToleranceConfig& tol) {
  return float_complement(existing, candidates, count, tol);
}
RationalMatrix complement_directions(const RationalMatrix& existing, const RationalMatrix& candidates,
                                     std::size_t count, const ToleranceConfig&) {
  return exact_complement(existing, candidates, count);
}
GaussMatrix complement_directions(const GaussMatrix& existing, const GaussMatrix& candidates, std::size_t count,
                                  const ToleranceConfig&) {
  return exact_complement(existing, candidates, count);
}

std::vector<double> singular_values(const ComplexMatrix& m) { return float_singular_values(m); }
std::vector<double> singular_values(const RealMatrix& m) { return float_singular_values(m); }

void ToleranceConfig::validate() const {
  for (double t : {eigen_cluster_tol, rank_tol, realness_tol}) {
    if (!(t >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "tolerances must be nonnegative");
  }
}

}  // namespace minctrl
