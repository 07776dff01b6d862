#include "minctrl/verify.hpp"

#include "minctrl/linalg.hpp"

namespace minctrl {
namespace {

template <class F>
Matrix<F> shifted_identity_minus(const Matrix<F>& a, const F& lambda) {
  Matrix<F> m = -a;
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) += lambda;
  return m;
}

void require_shapes(std::size_t a_rows, std::size_t a_cols, std::size_t other_rows, const char* what) {
  if (a_rows != a_cols || a_rows == 0) {
    throw Error(ErrorCode::kInvalidArgument, "state matrix must be square and nonempty");
  }
  if (other_rows != a_rows) {
    throw Error(ErrorCode::kInvalidArgument, std::string("dimension mismatch between A and ") + what);
  }
}

// lambda I - A over the cheapest field that holds lambda.
template <class B>
std::size_t pencil_rank(const RealMatrixOf<B>& a, const RealMatrixOf<B>& extra, const EigenvalueGroup<B>& g,
                        bool stack_rows, const ToleranceConfig& tol) {
  using R = typename B::Real;
  if (g.kind == EigenKind::kReal) {
    const Matrix<R> p = shifted_identity_minus(a, R(real_part(g.value)));
    return rank(stack_rows ? vcat(p, extra) : hcat(p, extra), tol);
  }
  const auto p = shifted_identity_minus(complexify(a), g.value);
  const auto e = complexify(extra);
  return rank(stack_rows ? vcat(p, e) : hcat(p, e), tol);
}

template <class B>
ComplexMatrixOf<B> pencil_null_vector(const RealMatrixOf<B>& a, const RealMatrixOf<B>& extra,
                                      const EigenvalueGroup<B>& g, bool stack_rows, const ToleranceConfig& tol) {
  const auto p = shifted_identity_minus(complexify(a), g.value);
  const auto e = complexify(extra);
  // Controllability: x^H [lambda I - A, B] = 0. Observability: [lambda I - A; C] y = 0.
  const auto basis = stack_rows ? null_space_basis(vcat(p, e), tol) : null_space_basis(hcat(p, e).adjoint(), tol);
  return basis.cols() > 0 ? basis.col(0) : ComplexMatrixOf<B>(a.rows(), 0);
}

template <class B>
VerifyReport<B> run_pbh(const RealMatrixOf<B>& a, const RealMatrixOf<B>& m, const EigenStructure<B>& eigen,
                        const ToleranceConfig& tol, bool observability) {
  using C = typename B::Complex;
  const std::size_t n = a.rows();
  VerifyReport<B> rep;
  rep.n = n;
  bool ok = true;
  const Matrix<C> mc = complexify(m);
  for (const auto& g : eigen.groups) {
    PencilRank<B> pr;
    pr.eigenvalue = g.value;
    pr.geometric_multiplicity = g.geometric_multiplicity;
    pr.pencil_rank = pencil_rank(a, m, g, observability, tol);

    Matrix<C> basis;
    Matrix<C> projected;
    if (observability) {
      basis = null_space_basis(shifted_identity_minus(complexify(a), g.value), tol);
      projected = mc * basis;
    } else {
      basis = g.left_basis;
      projected = mc.adjoint() * basis;
    }
    pr.eigenvector_rank = rank(projected, tol);
    const bool eig_ok = pr.eigenvector_rank == basis.cols() && basis.cols() > 0;
    rep.lemma2.push_back(eig_ok);
    const bool pencil_ok = pr.pencil_rank == n;
    if (!eig_ok || !pencil_ok) {
      ok = false;
      Witness<B> w;
      w.eigenvalue = g.value;
      const auto coeffs = null_space_basis(projected, tol);
      if (!eig_ok && coeffs.cols() > 0) {
        w.vector = basis * coeffs.col(0);
      } else {
        w.vector = pencil_null_vector(a, m, g, observability, tol);
      }
      if (w.vector.cols() > 0) rep.witnesses.push_back(std::move(w));
    }
    rep.ranks.push_back(std::move(pr));
  }
  rep.kalman = observability ? kalman_rank(RealMatrixOf<B>(a.transpose()), RealMatrixOf<B>(m.transpose()), tol)
                             : kalman_rank(a, m, tol);
  if (observability) {
    rep.verdict = ok ? Verdict::kObservable : Verdict::kUnobservable;
  } else {
    rep.verdict = ok ? Verdict::kControllable : Verdict::kUncontrollable;
  }
  return rep;
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kControllable:
      return "controllable";
    case Verdict::kUncontrollable:
      return "uncontrollable";
    case Verdict::kObservable:
      return "observable";
    case Verdict::kUnobservable:
      return "unobservable";
  }
  return "unknown";
}

KalmanRank kalman_rank(const RealMatrix& a, const RealMatrix& b, const ToleranceConfig& tol) {
  require_shapes(a.rows(), a.cols(), b.rows(), "B");
  const RealMatrix k = controllability_matrix(a, b);
  const auto sv = singular_values(k);
  KalmanRank out;
  if (sv.empty() || sv.front() == 0.0) return out;
  const double cutoff = tol.rank_tol * sv.front();
  for (double s : sv) {
    if (s > cutoff) ++out.rank;
    if (s > cutoff / 10.0 && s < cutoff * 10.0) out.near_threshold = true;
  }
  return out;
}

KalmanRank kalman_rank(const RationalMatrix& a, const RationalMatrix& b, const ToleranceConfig&) {
  require_shapes(a.rows(), a.cols(), b.rows(), "B");
  return {bareiss(controllability_matrix(a, b)).rank, false};
}

template <class B>
std::vector<bool> lemma2_check(const RealMatrixOf<B>& a, const RealMatrixOf<B>& b, const EigenStructure<B>& eigen,
                               const ToleranceConfig& tol) {
  require_shapes(a.rows(), a.cols(), b.rows(), "B");
  const auto bh = complexify(b).adjoint();
  std::vector<bool> out;
  for (const auto& g : eigen.groups) {
    out.push_back(rank(bh * g.left_basis, tol) == g.geometric_multiplicity);
  }
  return out;
}

template <class B>
VerifyReport<B> pbh_controllable(const RealMatrixOf<B>& a, const RealMatrixOf<B>& b, const EigenStructure<B>& eigen,
                                 const ToleranceConfig& tol) {
  require_shapes(a.rows(), a.cols(), b.rows(), "B");
  return run_pbh(a, b, eigen, tol, false);
}

template <class B>
VerifyReport<B> pbh_observable(const RealMatrixOf<B>& a, const RealMatrixOf<B>& c, const EigenStructure<B>& eigen,
                               const ToleranceConfig& tol) {
  require_shapes(a.rows(), a.cols(), c.cols(), "C");
  return run_pbh(a, c, eigen, tol, true);
}

VerifyReport<FloatBackend> pbh_controllable(const RealMatrix& a, const RealMatrix& b, const ToleranceConfig& tol) {
  require_shapes(a.rows(), a.cols(), b.rows(), "B");
  return pbh_controllable<FloatBackend>(a, b, compute_eigenstructure(a, tol), tol);
}

VerifyReport<ExactBackend> pbh_controllable(const RationalMatrix& a, const RationalMatrix& b,
                                            const ToleranceConfig& tol) {
  require_shapes(a.rows(), a.cols(), b.rows(), "B");
  return pbh_controllable<ExactBackend>(a, b, compute_eigenstructure(a, tol), tol);
}

VerifyReport<FloatBackend> pbh_observable(const RealMatrix& a, const RealMatrix& c, const ToleranceConfig& tol) {
  require_shapes(a.rows(), a.cols(), c.cols(), "C");
  return pbh_observable<FloatBackend>(a, c, compute_eigenstructure(a, tol), tol);
}

VerifyReport<ExactBackend> pbh_observable(const RationalMatrix& a, const RationalMatrix& c,
                                          const ToleranceConfig& tol) {
  require_shapes(a.rows(), a.cols(), c.cols(), "C");
  return pbh_observable<ExactBackend>(a, c, compute_eigenstructure(a, tol), tol);
}

template std::vector<bool> lemma2_check<FloatBackend>(const RealMatrix&, const RealMatrix&,
                                                      const EigenStructure<FloatBackend>&, const ToleranceConfig&);
template std::vector<bool> lemma2_check<ExactBackend>(const RationalMatrix&, const RationalMatrix&,
                                                      const EigenStructure<ExactBackend>&, const ToleranceConfig&);
template VerifyReport<FloatBackend> pbh_controllable<FloatBackend>(const RealMatrix&, const RealMatrix&,
                                                                   const EigenStructure<FloatBackend>&,
                                                                   const ToleranceConfig&);
template VerifyReport<ExactBackend> pbh_controllable<ExactBackend>(const RationalMatrix&, const RationalMatrix&,
                                                                   const EigenStructure<ExactBackend>&,
                                                                   const ToleranceConfig&);
template VerifyReport<FloatBackend> pbh_observable<FloatBackend>(const RealMatrix&, const RealMatrix&,
                                                                 const EigenStructure<FloatBackend>&,
                                                                 const ToleranceConfig&);
template VerifyReport<ExactBackend> pbh_observable<ExactBackend>(const RationalMatrix&, const RationalMatrix&,
                                                                 const EigenStructure<ExactBackend>&,
                                                                 const ToleranceConfig&);

}  // namespace minctrl
