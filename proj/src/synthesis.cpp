#include "minctrl/synthesis.hpp"

#include <string>

#include "minctrl/linalg.hpp"
#include "minctrl/random.hpp"

namespace minctrl {
namespace {

constexpr unsigned kAlphaBits = 10;

// |alpha| = k / 2^10 with k in [512, 2048].
template <class R>
R draw_magnitude(Rng& rng) {
  return dyadic<R>(rng.between(512, 2048), kAlphaBits);
}

// ((1 - t^2) / (1 + t^2), 2t / (1 + t^2)) for dyadic t in [-1, 1], then a random sign.
template <class R>
std::pair<R, R> draw_unit_phase(Rng& rng) {
  const R t = dyadic<R>(rng.between(-(1 << kAlphaBits), 1 << kAlphaBits), kAlphaBits);
  const R den = R(1) + t * t;
  R c = (R(1) - t * t) / den;
  R s = R(2) * t / den;
  if (rng.coin()) {
    c = -c;
    s = -s;
  }
  return {c, s};
}

template <class B>
double realness_defect(const typename B::Complex& z) {
  return magnitude(imag_part(z));
}

template <class B>
void require_groups(const JordanStructure<B>& js) {
  if (js.eigen.groups.empty()) throw Error(ErrorCode::kInvalidArgument, "empty eigenstructure");
}

}  // namespace

template <class B>
AlphaAssignment<B> AlphaAssignment<B>::ones(const JordanStructure<B>& js) {
  AlphaAssignment out;
  for (const auto& sizes : js.block_sizes) out.values.emplace_back(sizes.size(), typename B::Complex(1));
  return out;
}

template <class B>
AlphaAssignment<B> AlphaAssignment<B>::random(const JordanStructure<B>& js, std::uint64_t seed) {
  using R = typename B::Real;
  Rng rng(seed);
  AlphaAssignment out;
  out.values.resize(js.block_sizes.size());
  for (std::size_t g = 0; g < js.block_sizes.size(); ++g) {
    const auto& grp = js.eigen.groups[g];
    if (grp.kind == EigenKind::kComplex && !grp.representative) continue;
    for (std::size_t j = 0; j < js.block_sizes[g].size(); ++j) {
      const R r = draw_magnitude<R>(rng);
      if (grp.kind == EigenKind::kReal) {
        out.values[g].push_back(make_complex(rng.coin() ? R(-r) : r, R(0)));
      } else {
        auto [c, s] = draw_unit_phase<R>(rng);
        out.values[g].push_back(make_complex(R(r * c), R(r * s)));
      }
    }
  }
  for (std::size_t g = 0; g < js.block_sizes.size(); ++g) {
    const auto& grp = js.eigen.groups[g];
    if (grp.kind != EigenKind::kComplex || grp.representative) continue;
    for (const auto& v : out.values[*grp.conjugate_partner]) out.values[g].push_back(conj(v));
  }
  return out;
}

template <class B>
void AlphaAssignment<B>::validate(const JordanStructure<B>& js, const ToleranceConfig& tol) const {
  if (values.size() != js.block_sizes.size()) {
    throw Error(ErrorCode::kInvalidArgument, "alpha assignment has the wrong number of groups");
  }
  for (std::size_t g = 0; g < values.size(); ++g) {
    const auto& grp = js.eigen.groups[g];
    const std::string where = "group " + std::to_string(g);
    if (values[g].size() != js.block_sizes[g].size()) {
      throw Error(ErrorCode::kInvalidArgument, "alpha count mismatch at " + where);
    }
    for (std::size_t j = 0; j < values[g].size(); ++j) {
      const auto& v = values[g][j];
      bool zero;
      if constexpr (kIsExactBackend<B>) {
        zero = is_exact_zero(v);
      } else {
        zero = v == typename B::Complex(0);
      }
      if (zero) {
        throw Error(ErrorCode::kInvalidArgument, "zero alpha at " + where);
      }
      if (grp.kind == EigenKind::kReal) {
        const bool real = kIsExactBackend<B> ? realness_defect<B>(v) == 0.0 : realness_defect<B>(v) <= tol.realness_tol;
        if (!real) throw Error(ErrorCode::kInvalidArgument, "non-real alpha on real " + where);
      } else if (!grp.representative) {
        const auto& partner = values[*grp.conjugate_partner][j];
        const double gap = magnitude(typename B::Complex(v - conj(partner)));
        const bool paired = kIsExactBackend<B> ? gap == 0.0 : gap <= tol.realness_tol;
        if (!paired) throw Error(ErrorCode::kInvalidArgument, "alpha pairing broken at " + where);
      }
    }
  }
}

std::size_t minimal_input_count(const RealMatrix& a, const ToleranceConfig& tol) {
  return compute_eigenstructure(a, tol).p_max;
}

std::size_t minimal_input_count(const RationalMatrix& a, const ToleranceConfig& tol) {
  return compute_eigenstructure(a, tol).p_max;
}

template <class B>
InputSynthesis<B> synthesize_minimal_input(const RealMatrixOf<B>& a, const JordanStructure<B>& js,
                                           const std::optional<AlphaAssignment<B>>& alphas,
                                           const ToleranceConfig& tol) {
  using C = typename B::Complex;
  require_groups(js);
  InputSynthesis<B> out;
  out.jordan = js;
  out.alphas = alphas ? *alphas : AlphaAssignment<B>::ones(js);
  out.alphas.validate(js, tol);
  const std::size_t n = a.rows();
  const std::size_t q = js.eigen.p_max;
  out.q = q;

  Matrix<C> literal(n, q);
  Matrix<C> full(n, q);
  for (std::size_t g = 0; g < js.block_sizes.size(); ++g) {
    const auto& grp = js.eigen.groups[g];
    const Matrix<C> part = js.group_chains(g) * build_bhat_block(js.block_sizes[g], q, out.alphas.values[g]);
    full += part;
    if (grp.kind == EigenKind::kReal) {
      literal += part;
    } else if (grp.representative) {
      literal += complexify(real_part(part)) * C(2);
    }
  }
  out.imag_residue = std::max(max_imag(full), max_imag(literal));
  const double drift = max_abs(Matrix<C>(full - literal));
  const bool real_ok = kIsExactBackend<B> ? (out.imag_residue == 0.0 && drift == 0.0)
                                          : (out.imag_residue <= tol.realness_tol &&
                                             drift <= tol.realness_tol * std::max(1.0, max_abs(full)));
  if (!real_ok) {
    throw Error(ErrorCode::kRealness, "synthesized input has imaginary residue " + to_string(out.imag_residue) +
                                          " (assembly drift " + to_string(drift) + ")");
  }
  out.b = real_part(literal);
  out.verification = pbh_controllable<B>(a, out.b, js.eigen, tol);
  if (!out.verification.affirmative()) {
    throw Error(ErrorCode::kVerification, "post-hoc PBH test rejected the synthesized input (kalman rank " +
                                              std::to_string(out.verification.kalman.rank) + " of " +
                                              std::to_string(n) + ")");
  }
  return out;
}

template <class B>
OutputSynthesis<B> synthesize_minimal_output(const RealMatrixOf<B>& a, const JordanStructure<B>& js_transpose,
                                             const std::optional<AlphaAssignment<B>>& alphas,
                                             const ToleranceConfig& tol) {
  OutputSynthesis<B> out;
  out.dual = synthesize_minimal_input<B>(a.transpose(), js_transpose, alphas, tol);
  out.c = out.dual.b.transpose();
  // A and A^T share eigenvalues and multiplicities; the observability test
  // computes its own right eigenbases.
  out.verification = pbh_observable<B>(a, out.c, js_transpose.eigen, tol);
  if (!out.verification.affirmative()) {
    throw Error(ErrorCode::kVerification, "post-hoc PBH test rejected the synthesized output");
  }
  return out;
}

InputSynthesis<FloatBackend> synthesize_minimal_input(const RealMatrix& a,
                                                      const std::optional<AlphaAssignment<FloatBackend>>& alphas,
                                                      const ToleranceConfig& tol) {
  const auto js = jordan_structure<FloatBackend>(a, compute_eigenstructure(a, tol), tol);
  return synthesize_minimal_input<FloatBackend>(a, js, alphas, tol);
}

InputSynthesis<ExactBackend> synthesize_minimal_input(const RationalMatrix& a,
                                                      const std::optional<AlphaAssignment<ExactBackend>>& alphas,
                                                      const ToleranceConfig& tol) {
  const auto js = jordan_structure<ExactBackend>(a, compute_eigenstructure(a, tol), tol);
  return synthesize_minimal_input<ExactBackend>(a, js, alphas, tol);
}

OutputSynthesis<FloatBackend> synthesize_minimal_output(const RealMatrix& a,
                                                        const std::optional<AlphaAssignment<FloatBackend>>& alphas,
                                                        const ToleranceConfig& tol) {
  const RealMatrix at = a.transpose();
  const auto js = jordan_structure<FloatBackend>(at, compute_eigenstructure(at, tol), tol);
  return synthesize_minimal_output<FloatBackend>(a, js, alphas, tol);
}

OutputSynthesis<ExactBackend> synthesize_minimal_output(const RationalMatrix& a,
                                                        const std::optional<AlphaAssignment<ExactBackend>>& alphas,
                                                        const ToleranceConfig& tol) {
  const RationalMatrix at = a.transpose();
  const auto js = jordan_structure<ExactBackend>(at, compute_eigenstructure(at, tol), tol);
  return synthesize_minimal_output<ExactBackend>(a, js, alphas, tol);
}

template struct AlphaAssignment<FloatBackend>;
template struct AlphaAssignment<ExactBackend>;
template InputSynthesis<FloatBackend> synthesize_minimal_input<FloatBackend>(
    const RealMatrix&, const JordanStructure<FloatBackend>&, const std::optional<AlphaAssignment<FloatBackend>>&,
    const ToleranceConfig&);
template InputSynthesis<ExactBackend> synthesize_minimal_input<ExactBackend>(
    const RationalMatrix&, const JordanStructure<ExactBackend>&, const std::optional<AlphaAssignment<ExactBackend>>&,
    const ToleranceConfig&);
template OutputSynthesis<FloatBackend> synthesize_minimal_output<FloatBackend>(
    const RealMatrix&, const JordanStructure<FloatBackend>&, const std::optional<AlphaAssignment<FloatBackend>>&,
    const ToleranceConfig&);
template OutputSynthesis<ExactBackend> synthesize_minimal_output<ExactBackend>(
    const RationalMatrix&, const JordanStructure<ExactBackend>&, const std::optional<AlphaAssignment<ExactBackend>>&,
    const ToleranceConfig&);

}  // namespace minctrl
