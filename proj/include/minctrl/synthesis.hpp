#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "minctrl/spectral.hpp"
#include "minctrl/verify.hpp"

namespace minctrl {

/// Nonzero scalars alpha, one per Jordan block. Stored for every group;
/// partner groups always carry the conjugates of their representatives.
template <class B>
struct AlphaAssignment {
  std::vector<std::vector<typename B::Complex>> values;

  /// alpha = 1 everywhere.
  static AlphaAssignment ones(const JordanStructure<B>& js);
  /// |alpha| drawn from a dyadic grid on [0.5, 2]; real groups get a random
  /// sign, complex groups a random rational point on the unit circle.
  static AlphaAssignment random(const JordanStructure<B>& js, std::uint64_t seed);

  /// Throws Error(kInvalidArgument) on shape mismatch, a zero alpha, a
  /// non-real alpha on a real group, or broken conjugate pairing.
  void validate(const JordanStructure<B>& js, const ToleranceConfig& tol = {}) const;
};

template <class B>
struct InputSynthesis {
  RealMatrixOf<B> b;
  std::size_t q = 0;
  AlphaAssignment<B> alphas;
  JordanStructure<B> jordan;
  /// max |Im| of T * col{Bhat_1; ...; Bhat_k} before truncation.
  double imag_residue = 0.0;
  VerifyReport<B> verification;
};

template <class B>
struct OutputSynthesis {
  RealMatrixOf<B> c;
  /// Input synthesis for A^T; c is its B transposed.
  InputSynthesis<B> dual;
  VerifyReport<B> verification;
};

std::size_t minimal_input_count(const RealMatrix& a, const ToleranceConfig& tol = {});
std::size_t minimal_input_count(const RationalMatrix& a, const ToleranceConfig& tol = {});

/// sum(block_sizes) x p_max; column j carries alphas[j] in the last row of the
/// j-th row block, the trailing p_max - p columns are zero.
template <class C>
Matrix<C> build_bhat_block(const std::vector<std::size_t>& block_sizes, std::size_t p_max,
                           const std::vector<C>& alphas) {
  if (alphas.size() != block_sizes.size() || block_sizes.size() > p_max) {
    throw Error(ErrorCode::kInvalidArgument, "build_bhat_block: block count must match alphas and not exceed p_max");
  }
  std::size_t m = 0;
  for (std::size_t s : block_sizes) m += s;
  Matrix<C> out(m, p_max);
  std::size_t row = 0;
  for (std::size_t j = 0; j < block_sizes.size(); ++j) {
    if (block_sizes[j] == 0) throw Error(ErrorCode::kInvalidArgument, "build_bhat_block: empty block");
    if (magnitude(alphas[j]) == 0.0) throw Error(ErrorCode::kInvalidArgument, "build_bhat_block: zero alpha");
    row += block_sizes[j];
    out(row - 1, j) = alphas[j];
  }
  return out;
}

/// B = sum_real [T_i] Bhat_i + 2 sum_rep Re{[T_i] Bhat_i}, checked for realness
/// and verified with PBH afterwards (Error(kVerification) on failure).
template <class B>
InputSynthesis<B> synthesize_minimal_input(const RealMatrixOf<B>& a, const JordanStructure<B>& js,
                                           const std::optional<AlphaAssignment<B>>& alphas,
                                           const ToleranceConfig& tol = {});

InputSynthesis<FloatBackend> synthesize_minimal_input(const RealMatrix& a,
                                                      const std::optional<AlphaAssignment<FloatBackend>>& alphas = {},
                                                      const ToleranceConfig& tol = {});
InputSynthesis<ExactBackend> synthesize_minimal_input(const RationalMatrix& a,
                                                      const std::optional<AlphaAssignment<ExactBackend>>& alphas = {},
                                                      const ToleranceConfig& tol = {});

/// C = (input synthesis of A^T).B^T; `js_transpose` is the Jordan structure of A^T.
template <class B>
OutputSynthesis<B> synthesize_minimal_output(const RealMatrixOf<B>& a, const JordanStructure<B>& js_transpose,
                                             const std::optional<AlphaAssignment<B>>& alphas,
                                             const ToleranceConfig& tol = {});

OutputSynthesis<FloatBackend> synthesize_minimal_output(const RealMatrix& a,
                                                        const std::optional<AlphaAssignment<FloatBackend>>& alphas = {},
                                                        const ToleranceConfig& tol = {});
OutputSynthesis<ExactBackend> synthesize_minimal_output(const RationalMatrix& a,
                                                        const std::optional<AlphaAssignment<ExactBackend>>& alphas = {},
                                                        const ToleranceConfig& tol = {});

}  // namespace minctrl
