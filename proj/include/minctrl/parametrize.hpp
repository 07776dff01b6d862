#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "minctrl/spectral.hpp"

namespace minctrl {

/// One m_i x q block per eigenvalue group, in group order (partners included).
template <class B>
struct ParamBlockSet {
  std::vector<ComplexMatrixOf<B>> blocks;
  std::size_t q = 0;
};

/// Z for one group: block-diagonal, block j is the m_j-vector with a single 1
/// in its last entry. Under upper-bidiagonal Jordan blocks the last row of
/// each block in T^{-1} is a left eigenvector, so Bhat^H Z equals B^H X up to
/// an invertible change of basis of X.
template <class T>
Matrix<T> build_selector(const std::vector<std::size_t>& block_sizes) {
  std::size_t m = 0;
  for (std::size_t s : block_sizes) {
    if (s == 0) throw Error(ErrorCode::kInvalidArgument, "build_selector: empty block");
    m += s;
  }
  Matrix<T> z(m, block_sizes.size());
  std::size_t row = 0;
  for (std::size_t j = 0; j < block_sizes.size(); ++j) {
    row += block_sizes[j];
    z(row - 1, j) = T(1);
  }
  return z;
}

/// q x p tilde matrix Bhat^H Z.
template <class C>
Matrix<C> tilde_matrix(const Matrix<C>& bhat, const std::vector<std::size_t>& block_sizes) {
  return bhat.adjoint() * build_selector<C>(block_sizes);
}

/// B = T * col{Bhat_1; ...; Bhat_k}. Throws Error(kRealness) naming the first
/// group that breaks realness pairing when the result is not real.
template <class B>
RealMatrixOf<B> assemble_from_params(const JordanStructure<B>& js, const ParamBlockSet<B>& params,
                                     const ToleranceConfig& tol = {});

/// Row partition of T^{-1} B by group.
template <class B>
ParamBlockSet<B> extract_params(const JordanStructure<B>& js, const RealMatrixOf<B>& b);

template <class B>
struct ParamValidation {
  bool width_ok = false;  // q == p_max
  bool real_ok = false;   // assembled B real within realness_tol
  std::vector<bool> fcr;  // per group: tilde has full column rank p_i
  std::string reason;     // first failure, empty when everything holds

  bool all_fcr() const;
  /// Minimal-width validity.
  bool valid() const { return width_ok && real_ok && all_fcr(); }
  /// Controllability criterion for any width q >= p_max.
  bool controllable() const { return real_ok && all_fcr(); }
};

template <class B>
ParamValidation<B> validate_params(const JordanStructure<B>& js, const ParamBlockSet<B>& params,
                                   const ToleranceConfig& tol = {});

template <class B>
bool validate_minimal(const JordanStructure<B>& js, const ParamBlockSet<B>& params, const ToleranceConfig& tol = {}) {
  return validate_params(js, params, tol).valid();
}

/// Real parameters: entries k / 2^20 uniform on [-1, 1] (complex groups with
/// independent real and imaginary parts, partners conjugated). With
/// `zero_probability` > 0 each entry is independently zeroed, which makes
/// FCR failures likely and exercises the invalid branch.
template <class B>
ParamBlockSet<B> random_params(const JordanStructure<B>& js, std::uint64_t seed, std::size_t q,
                               double zero_probability = 0.0);

template <class B>
struct SampleResult {
  std::vector<RealMatrixOf<B>> matrices;
  std::vector<ParamBlockSet<B>> params;
  std::size_t draws = 0;
};

/// `count` minimal-width matrices, rejection-sampled until validate_minimal
/// passes. Sample k uses seed derive_seed(seed, k) and its own retry stream;
/// Error(kRejectionBudget) once more than 100 * count draws were spent.
template <class B>
SampleResult<B> sample_minimal(const JordanStructure<B>& js, std::uint64_t seed, std::size_t count,
                               const ToleranceConfig& tol = {});

}  // namespace minctrl
