#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "minctrl/backend.hpp"
#include "minctrl/tolerance.hpp"

namespace minctrl {

enum class EigenKind { kReal, kComplex };

/// One distinct eigenvalue of A together with its left eigenspace.
template <class B>
struct EigenvalueGroup {
  typename B::Complex value{};
  EigenKind kind = EigenKind::kReal;
  std::size_t algebraic_multiplicity = 0;
  std::size_t geometric_multiplicity = 0;
  /// n x p; columns x satisfy (conj(lambda) I - A^T) x = 0 and are independent.
  ComplexMatrixOf<B> left_basis;
  /// For complex groups, index of the group holding conj(value).
  std::optional<std::size_t> conjugate_partner;
  /// True for the complex group of a pair that carries Im(value) > 0.
  bool representative = false;
};

/// Distinct eigenvalues of a real n x n matrix.
///
/// Ordering: real groups ascending, then complex representatives (Im > 0)
/// ascending by (Re, Im), then their partners in the same order, so the
/// partner of complex group i is i + k_c / 2.
template <class B>
struct EigenStructure {
  std::size_t n = 0;
  std::vector<EigenvalueGroup<B>> groups;
  std::size_t k_r = 0;
  std::size_t k_c = 0;
  std::size_t p_max = 0;
  /// Smallest distance between two distinct eigenvalues (infinity if only one).
  double min_gap = 0.0;
  std::vector<std::string> warnings;

  std::size_t representative_count() const { return k_c / 2; }
};

/// Jordan data: per group the block sizes (descending) and chain matrices
/// T_{i,j} with A T_{i,j} = T_{i,j} J_{m}(lambda_i), plus the assembled T.
template <class B>
struct JordanStructure {
  EigenStructure<B> eigen;
  std::vector<std::vector<std::size_t>> block_sizes;
  std::vector<std::vector<ComplexMatrixOf<B>>> chains;
  ComplexMatrixOf<B> transform;
  ComplexMatrixOf<B> transform_inverse;

  /// m_i = sum of block sizes of group i (its algebraic multiplicity).
  std::size_t group_size(std::size_t group) const;
  /// Row offset of group i inside T^{-1} coordinates.
  std::size_t group_offset(std::size_t group) const;
  /// [T_{i,1} ... T_{i,p_i}] for one group.
  ComplexMatrixOf<B> group_chains(std::size_t group) const;
  /// Block-diagonal Jordan matrix in the same ordering as T.
  ComplexMatrixOf<B> jordan_matrix() const;
};

/// Raised by the exact backend when the spectrum is not (Gaussian-)rational.
class IrrationalSpectrumError : public Error {
 public:
  explicit IrrationalSpectrumError(const std::string& what) : Error(ErrorCode::kIrrationalSpectrum, what) {}
};

EigenStructure<FloatBackend> compute_eigenstructure(const RealMatrix& a, const ToleranceConfig& tol = {});
EigenStructure<ExactBackend> compute_eigenstructure(const RationalMatrix& a, const ToleranceConfig& tol = {});

/// n - rank(conj(lambda) I - A^T). Throws Error(kNotAnEigenvalue) if zero.
std::size_t geometric_multiplicity(const RealMatrix& a, const Complex& lambda, const ToleranceConfig& tol = {});
std::size_t geometric_multiplicity(const RationalMatrix& a, const GaussRational& lambda,
                                   const ToleranceConfig& tol = {});

/// X_i = null_space_basis(conj(lambda_i) I - A^T).
ComplexMatrix left_eigenbasis(const RealMatrix& a, const Complex& lambda, const ToleranceConfig& tol = {});
GaussMatrix left_eigenbasis(const RationalMatrix& a, const GaussRational& lambda, const ToleranceConfig& tol = {});

template <class B>
JordanStructure<B> jordan_structure(const RealMatrixOf<B>& a, const EigenStructure<B>& eigen,
                                    const ToleranceConfig& tol = {});

/// Floating image of an exact eigenstructure (values and bases rounded).
EigenStructure<FloatBackend> to_floating(const EigenStructure<ExactBackend>& e);

/// Jordan block sizes from the Weyr characteristic: given nullities
/// d_k = dim ker (A - lambda I)^k for k = 0..K (d_0 = 0), returns sizes descending.
std::vector<std::size_t> block_sizes_from_nullities(const std::vector<std::size_t>& nullities);

}  // namespace minctrl
