#pragma once

#include <cstddef>
#include <vector>

#include "minctrl/matrix.hpp"
#include "minctrl/tolerance.hpp"

namespace minctrl {

// Rank-revealing kernels. Floating overloads decide rank with singular values
// (rank_tol relative to sigma_max); exact overloads use exact elimination and
// ignore the tolerance.

std::size_t rank(const RealMatrix& m, const ToleranceConfig& tol = {});
std::size_t rank(const ComplexMatrix& m, const ToleranceConfig& tol = {});
std::size_t rank(const RationalMatrix& m, const ToleranceConfig& tol = {});
std::size_t rank(const GaussMatrix& m, const ToleranceConfig& tol = {});

/// Columns span the right null space: orthonormal on the floating backend,
/// reduced-echelon (one unit entry per free column) on the exact backend.
RealMatrix null_space_basis(const RealMatrix& m, const ToleranceConfig& tol = {});
ComplexMatrix null_space_basis(const ComplexMatrix& m, const ToleranceConfig& tol = {});
RationalMatrix null_space_basis(const RationalMatrix& m, const ToleranceConfig& tol = {});
GaussMatrix null_space_basis(const GaussMatrix& m, const ToleranceConfig& tol = {});

double det(const RealMatrix& m);
Complex det(const ComplexMatrix& m);
Rational det(const RationalMatrix& m);
GaussRational det(const GaussMatrix& m);

/// Particular solution of m * x = rhs; the minimum-norm one when m is rank
/// deficient. Throws NoSolutionError when the system is inconsistent.
RealMatrix solve_linear(const RealMatrix& m, const RealMatrix& rhs, const ToleranceConfig& tol = {});
ComplexMatrix solve_linear(const ComplexMatrix& m, const ComplexMatrix& rhs,
                           const ToleranceConfig& tol = {});
RationalMatrix solve_linear(const RationalMatrix& m, const RationalMatrix& rhs,
                            const ToleranceConfig& tol = {});
GaussMatrix solve_linear(const GaussMatrix& m, const GaussMatrix& rhs, const ToleranceConfig& tol = {});

/// Inverse of a square matrix; throws Error(kInvalidArgument) when singular.
RealMatrix inverse(const RealMatrix& m, const ToleranceConfig& tol = {});
ComplexMatrix inverse(const ComplexMatrix& m, const ToleranceConfig& tol = {});
RationalMatrix inverse(const RationalMatrix& m, const ToleranceConfig& tol = {});
GaussMatrix inverse(const GaussMatrix& m, const ToleranceConfig& tol = {});

/// Picks `count` directions in span(candidates) that are independent of
/// span(existing). Floating: orthonormal directions from the projection onto
/// the orthogonal complement of span(existing). Exact: greedy selection of
/// candidate columns. Throws Error(kDefectiveStructure) if fewer exist.
RealMatrix complement_directions(const RealMatrix& existing, const RealMatrix& candidates,
                                 std::size_t count, const ToleranceConfig& tol = {});
ComplexMatrix complement_directions(const ComplexMatrix& existing, const ComplexMatrix& candidates,
                                    std::size_t count, const ToleranceConfig& tol = {});
RationalMatrix complement_directions(const RationalMatrix& existing, const RationalMatrix& candidates,
                                     std::size_t count, const ToleranceConfig& tol = {});
GaussMatrix complement_directions(const GaussMatrix& existing, const GaussMatrix& candidates,
                                  std::size_t count, const ToleranceConfig& tol = {});

/// Singular values in descending order (floating only).
std::vector<double> singular_values(const ComplexMatrix& m);
std::vector<double> singular_values(const RealMatrix& m);

/// Fraction-free (Bareiss) elimination on a rational matrix, after scaling
/// each row to integers. Exposes the exact rank and determinant together.
struct BareissResult {
  std::size_t rank = 0;
  Rational determinant = 0;  // zero unless square and nonsingular
};
BareissResult bareiss(const RationalMatrix& m);

/// Reduced row echelon form over an exact field.
template <class T>
struct EchelonForm {
  Matrix<T> reduced;
  std::vector<std::size_t> pivot_cols;
};
EchelonForm<Rational> rref(const RationalMatrix& m);
EchelonForm<GaussRational> rref(const GaussMatrix& m);

}  // namespace minctrl
