#include "minctrl/parametrize.hpp"

#include <string>

#include "minctrl/linalg.hpp"
#include "minctrl/random.hpp"

namespace minctrl {
namespace {

constexpr unsigned kParamBits = 20;

template <class B>
bool negligible(double value, double tol) {
  return kIsExactBackend<B> ? value == 0.0 : value <= tol;
}

template <class B>
void require_matching(const JordanStructure<B>& js, const ParamBlockSet<B>& params) {
  if (params.blocks.size() != js.block_sizes.size()) {
    throw Error(ErrorCode::kInvalidArgument, "parameter set has " + std::to_string(params.blocks.size()) +
                                                 " blocks, expected " + std::to_string(js.block_sizes.size()));
  }
  for (std::size_t g = 0; g < params.blocks.size(); ++g) {
    const auto& blk = params.blocks[g];
    if (blk.rows() != js.group_size(g) || blk.cols() != params.q) {
      throw Error(ErrorCode::kInvalidArgument, "parameter block " + std::to_string(g) + " has the wrong shape");
    }
  }
}

// First group whose block breaks real/conjugate pairing, if any.
template <class B>
std::string pairing_offender(const JordanStructure<B>& js, const ParamBlockSet<B>& params,
                             const ToleranceConfig& tol) {
  using C = typename B::Complex;
  for (std::size_t g = 0; g < params.blocks.size(); ++g) {
    const auto& grp = js.eigen.groups[g];
    if (grp.kind == EigenKind::kReal) {
      if (!negligible<B>(max_imag(params.blocks[g]), tol.realness_tol)) {
        return "real group " + std::to_string(g) + " has a non-real parameter block";
      }
    } else if (!grp.representative) {
      const std::size_t rep = *grp.conjugate_partner;
      const Matrix<C> diff = params.blocks[g] - params.blocks[rep].conjugate();
      if (!negligible<B>(max_abs(diff), tol.realness_tol)) {
        return "complex group " + std::to_string(g) + " is not the conjugate of group " + std::to_string(rep);
      }
    }
  }
  return {};
}

template <class R>
R draw_entry(Rng& rng, double zero_probability) {
  if (zero_probability > 0.0) {
    const auto cut = static_cast<std::uint64_t>(zero_probability * static_cast<double>(1u << kParamBits));
    if (rng.below(1u << kParamBits) < cut) return R(0);
  }
  return dyadic<R>(rng.between(-(std::int64_t{1} << kParamBits), std::int64_t{1} << kParamBits), kParamBits);
}

}  // namespace

template <class B>
RealMatrixOf<B> assemble_from_params(const JordanStructure<B>& js, const ParamBlockSet<B>& params,
                                     const ToleranceConfig& tol) {
  using C = typename B::Complex;
  require_matching(js, params);
  Matrix<C> stacked(0, params.q);
  for (const auto& blk : params.blocks) stacked = vcat(stacked, blk);
  const Matrix<C> full = js.transform * stacked;
  const double residue = max_imag(full);
  if (!negligible<B>(residue, tol.realness_tol)) {
    std::string who = pairing_offender(js, params, tol);
    if (who.empty()) who = "no single group is at fault";
    throw Error(ErrorCode::kRealness, "assembled matrix has imaginary residue " + to_string(residue) + ": " + who);
  }
  return real_part(full);
}

template <class B>
ParamBlockSet<B> extract_params(const JordanStructure<B>& js, const RealMatrixOf<B>& b) {
  if (b.rows() != js.eigen.n) throw Error(ErrorCode::kInvalidArgument, "input matrix has the wrong number of rows");
  const auto coords = js.transform_inverse * complexify(b);
  ParamBlockSet<B> out;
  out.q = b.cols();
  for (std::size_t g = 0; g < js.block_sizes.size(); ++g) {
    out.blocks.push_back(coords.block(js.group_offset(g), 0, js.group_size(g), b.cols()));
  }
  return out;
}

template <class B>
bool ParamValidation<B>::all_fcr() const {
  for (bool f : fcr)
    if (!f) return false;
  return true;
}

template <class B>
ParamValidation<B> validate_params(const JordanStructure<B>& js, const ParamBlockSet<B>& params,
                                   const ToleranceConfig& tol) {
  require_matching(js, params);
  ParamValidation<B> v;
  v.width_ok = params.q == js.eigen.p_max;
  if (!v.width_ok) {
    v.reason = "width " + std::to_string(params.q) + " differs from p_max " + std::to_string(js.eigen.p_max);
  }
  try {
    assemble_from_params(js, params, tol);
    v.real_ok = true;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kRealness) throw;
    if (v.reason.empty()) v.reason = e.what();
  }
  for (std::size_t g = 0; g < params.blocks.size(); ++g) {
    const std::size_t p = js.eigen.groups[g].geometric_multiplicity;
    const std::size_t r = rank(tilde_matrix(params.blocks[g], js.block_sizes[g]), tol);
    v.fcr.push_back(r == p);
    if (r != p && v.reason.empty()) {
      v.reason = "tilde matrix of group " + std::to_string(g) + " has rank " + std::to_string(r) + " < " +
                 std::to_string(p);
    }
  }
  return v;
}

template <class B>
ParamBlockSet<B> random_params(const JordanStructure<B>& js, std::uint64_t seed, std::size_t q,
                               double zero_probability) {
  using R = typename B::Real;
  using C = typename B::Complex;
  Rng rng(seed);
  ParamBlockSet<B> out;
  out.q = q;
  out.blocks.resize(js.block_sizes.size());
  for (std::size_t g = 0; g < js.block_sizes.size(); ++g) {
    const auto& grp = js.eigen.groups[g];
    if (grp.kind == EigenKind::kComplex && !grp.representative) continue;
    Matrix<C> blk(js.group_size(g), q);
    for (std::size_t i = 0; i < blk.rows(); ++i)
      for (std::size_t j = 0; j < q; ++j) {
        const R re = draw_entry<R>(rng, zero_probability);
        const R im = grp.kind == EigenKind::kReal ? R(0) : draw_entry<R>(rng, zero_probability);
        blk(i, j) = make_complex(re, im);
      }
    out.blocks[g] = std::move(blk);
  }
  for (std::size_t g = 0; g < js.block_sizes.size(); ++g) {
    const auto& grp = js.eigen.groups[g];
    if (grp.kind == EigenKind::kComplex && !grp.representative) {
      out.blocks[g] = out.blocks[*grp.conjugate_partner].conjugate();
    }
  }
  return out;
}

template <class B>
SampleResult<B> sample_minimal(const JordanStructure<B>& js, std::uint64_t seed, std::size_t count,
                               const ToleranceConfig& tol) {
  if (count == 0) throw Error(ErrorCode::kInvalidArgument, "sample count must be at least 1");
  SampleResult<B> out;
  const std::size_t budget = 100 * count;
  for (std::size_t k = 0; k < count; ++k) {
    const std::uint64_t sample_seed = derive_seed(seed, k);
    for (std::uint64_t attempt = 0;; ++attempt) {
      if (++out.draws > budget) {
        throw Error(ErrorCode::kRejectionBudget, "rejection budget of " + std::to_string(budget) +
                                                     " draws exhausted at sample " + std::to_string(k) +
                                                     "; FCR failures should have probability zero");
      }
      auto params = random_params(js, derive_seed(sample_seed, attempt), js.eigen.p_max);
      if (!validate_minimal(js, params, tol)) continue;
      out.matrices.push_back(assemble_from_params(js, params, tol));
      out.params.push_back(std::move(params));
      break;
    }
  }
  return out;
}

#define MINCTRL_INSTANTIATE(B)                                                                                   \
  template struct ParamValidation<B>;                                                                           \
  template RealMatrixOf<B> assemble_from_params<B>(const JordanStructure<B>&, const ParamBlockSet<B>&,          \
                                                   const ToleranceConfig&);                                     \
  template ParamBlockSet<B> extract_params<B>(const JordanStructure<B>&, const RealMatrixOf<B>&);               \
  template ParamValidation<B> validate_params<B>(const JordanStructure<B>&, const ParamBlockSet<B>&,            \
                                                 const ToleranceConfig&);                                       \
  template ParamBlockSet<B> random_params<B>(const JordanStructure<B>&, std::uint64_t, std::size_t, double);    \
  template SampleResult<B> sample_minimal<B>(const JordanStructure<B>&, std::uint64_t, std::size_t,             \
                                             const ToleranceConfig&);

MINCTRL_INSTANTIATE(FloatBackend)
MINCTRL_INSTANTIATE(ExactBackend)

#undef MINCTRL_INSTANTIATE

}  // namespace minctrl
