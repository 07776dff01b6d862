#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "minctrl/backend.hpp"
#include "minctrl/spectral.hpp"
#include "minctrl/tolerance.hpp"

namespace minctrl {

enum class Verdict { kControllable, kUncontrollable, kObservable, kUnobservable };

const char* to_string(Verdict v);

/// Certificate of failure: a left (controllability) or right (observability)
/// eigenvector annihilated by the input or output matrix.
template <class B>
struct Witness {
  typename B::Complex eigenvalue{};
  ComplexMatrixOf<B> vector;  // n x 1
};

/// Per-eigenvalue PBH data.
template <class B>
struct PencilRank {
  typename B::Complex eigenvalue{};
  std::size_t geometric_multiplicity = 0;
  /// rank [lambda I - A, B] (or its observability counterpart).
  std::size_t pencil_rank = 0;
  /// rank of B^H X (or C Y) on the eigenbasis of this eigenvalue.
  std::size_t eigenvector_rank = 0;
};

struct KalmanRank {
  std::size_t rank = 0;
  /// Floating only: some singular value lies within 10x of the rank cutoff.
  bool near_threshold = false;
};

template <class B>
struct VerifyReport {
  Verdict verdict = Verdict::kControllable;
  std::size_t n = 0;
  std::vector<Witness<B>> witnesses;
  std::vector<PencilRank<B>> ranks;
  std::vector<bool> lemma2;
  KalmanRank kalman;

  bool affirmative() const { return verdict == Verdict::kControllable || verdict == Verdict::kObservable; }
};

/// [B, AB, ..., A^{n-1} B].
template <class T>
Matrix<T> controllability_matrix(const Matrix<T>& a, const Matrix<T>& b) {
  Matrix<T> k = b;
  Matrix<T> block = b;
  for (std::size_t i = 1; i < a.rows(); ++i) {
    block = a * block;
    k = hcat(k, block);
  }
  return k;
}

/// [C; CA; ...; C A^{n-1}].
template <class T>
Matrix<T> observability_matrix(const Matrix<T>& a, const Matrix<T>& c) {
  return controllability_matrix(a.transpose(), c.transpose()).transpose();
}

KalmanRank kalman_rank(const RealMatrix& a, const RealMatrix& b, const ToleranceConfig& tol = {});
KalmanRank kalman_rank(const RationalMatrix& a, const RationalMatrix& b, const ToleranceConfig& tol = {});

/// Per group: rank(B^H X_i) == p_i.
template <class B>
std::vector<bool> lemma2_check(const RealMatrixOf<B>& a, const RealMatrixOf<B>& b, const EigenStructure<B>& eigen,
                               const ToleranceConfig& tol = {});

template <class B>
VerifyReport<B> pbh_controllable(const RealMatrixOf<B>& a, const RealMatrixOf<B>& b, const EigenStructure<B>& eigen,
                                 const ToleranceConfig& tol = {});

/// Observability of (A, C) checked directly on right eigenvectors and the
/// stacked pencil [lambda I - A; C]; `eigen` is the eigenstructure of A.
template <class B>
VerifyReport<B> pbh_observable(const RealMatrixOf<B>& a, const RealMatrixOf<B>& c, const EigenStructure<B>& eigen,
                               const ToleranceConfig& tol = {});

VerifyReport<FloatBackend> pbh_controllable(const RealMatrix& a, const RealMatrix& b, const ToleranceConfig& tol = {});
VerifyReport<ExactBackend> pbh_controllable(const RationalMatrix& a, const RationalMatrix& b,
                                            const ToleranceConfig& tol = {});
VerifyReport<FloatBackend> pbh_observable(const RealMatrix& a, const RealMatrix& c, const ToleranceConfig& tol = {});
VerifyReport<ExactBackend> pbh_observable(const RationalMatrix& a, const RationalMatrix& c,
                                          const ToleranceConfig& tol = {});

/// Closed form of det[B, AB, ..., A^{n-1}B] for A = T^{-1} diag(lambda) T and
/// B = T^{-1} bhat, where the rows of T are left eigenvectors:
///   det(T)^{-1} * prod_i bhat_i * prod_{i<j} (lambda_j - lambda_i).
/// The product runs over (lambda_j - lambda_i), the sign of the Vandermonde
/// determinant with rows (1, lambda_i, lambda_i^2, ...).
template <class T>
T vandermonde_det_oracle(const std::vector<T>& eigenvalues, const std::vector<T>& bhat, const T& det_t_inverse) {
  if (eigenvalues.size() != bhat.size()) {
    throw Error(ErrorCode::kInvalidArgument, "vandermonde_det_oracle: length mismatch");
  }
  T acc = det_t_inverse;
  for (const auto& b : bhat) acc *= b;
  for (std::size_t i = 0; i < eigenvalues.size(); ++i)
    for (std::size_t j = i + 1; j < eigenvalues.size(); ++j) acc *= T(eigenvalues[j] - eigenvalues[i]);
  return acc;
}

}  // namespace minctrl
