#include "minctrl/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "minctrl/linalg.hpp"
#include "minctrl/polynomial.hpp"

namespace minctrl {
namespace {

// Round-trip tolerance for A T = T J and T^{-1} A T = J on the floating backend.
constexpr double kRoundTripTol = 1e-8;

void require_square(std::size_t rows, std::size_t cols) {
  if (rows != cols || rows == 0) {
    throw Error(ErrorCode::kInvalidArgument, "state matrix must be square and nonempty");
  }
}

std::vector<Complex> raw_eigenvalues(const RealMatrix& a) {
  const auto n = static_cast<Eigen::Index>(a.rows());
  Eigen::MatrixXd e(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) e(i, j) = a(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  Eigen::EigenSolver<Eigen::MatrixXd> es(e, false);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::kSpectrumAmbiguity, "eigenvalue iteration did not converge");
  }
  const auto& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

template <class F>
Matrix<F> shifted(const Matrix<F>& a, const F& lambda) {
  Matrix<F> m = a;
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) -= lambda;
  return m;
}

// conj(lambda) I - A^T
template <class F>
Matrix<F> left_pencil(const Matrix<F>& a_complex, const F& lambda) {
  return -shifted(a_complex.transpose(), conj(lambda));
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t i) {
  while (parent[i] != i) i = parent[i] = parent[parent[i]];
  return i;
}

template <class B>
void finish_structure(EigenStructure<B>& es) {
  es.k_r = 0;
  es.k_c = 0;
  es.p_max = 0;
  for (const auto& g : es.groups) {
    (g.kind == EigenKind::kReal ? es.k_r : es.k_c)++;
    es.p_max = std::max(es.p_max, g.geometric_multiplicity);
  }
  es.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < es.groups.size(); ++i)
    for (std::size_t j = i + 1; j < es.groups.size(); ++j)
      es.min_gap = std::min(es.min_gap, std::abs(to_floating(es.groups[i].value) - to_floating(es.groups[j].value)));
}

// Orders groups reals-first and wires up conjugate partners. `reps` holds the
// complex groups with Im > 0; partners are generated here.
template <class B>
void assemble_groups(EigenStructure<B>& es, std::vector<EigenvalueGroup<B>> reals,
                     std::vector<EigenvalueGroup<B>> reps) {
  auto key = [](const EigenvalueGroup<B>& g) { return to_floating(g.value); };
  std::stable_sort(reals.begin(), reals.end(),
                   [&](const auto& x, const auto& y) { return key(x).real() < key(y).real(); });
  std::stable_sort(reps.begin(), reps.end(), [&](const auto& x, const auto& y) {
    const Complex a = key(x);
    const Complex b = key(y);
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  es.groups = std::move(reals);
  const std::size_t first_rep = es.groups.size();
  const std::size_t half = reps.size();
  for (std::size_t i = 0; i < half; ++i) {
    reps[i].representative = true;
    reps[i].conjugate_partner = first_rep + half + i;
    es.groups.push_back(reps[i]);
  }
  for (std::size_t i = 0; i < half; ++i) {
    EigenvalueGroup<B> p = reps[i];
    p.value = conj(p.value);
    p.left_basis = p.left_basis.conjugate();
    p.representative = false;
    p.conjugate_partner = first_rep + i;
    es.groups.push_back(std::move(p));
  }
  finish_structure(es);
}

template <class F>
struct ChainResult {
  std::vector<std::size_t> sizes;
  std::vector<Matrix<F>> chains;
};

// Jordan chains of N = A - lambda I for one eigenvalue of algebraic
// multiplicity `alg`, largest chains first. Column k of a chain is
// N^{s-1-k} top, so the first column is an eigenvector.
template <class F>
ChainResult<F> build_chains(const Matrix<F>& nmat, std::size_t alg, const ToleranceConfig& tol) {
  const std::size_t n = nmat.rows();
  std::vector<std::size_t> nullity{0};
  std::vector<Matrix<F>> kernels{Matrix<F>(n, 0)};
  Matrix<F> power = Matrix<F>::identity(n);
  while (nullity.back() < alg && nullity.size() <= alg) {
    power = nmat * power;
    kernels.push_back(null_space_basis(power, tol));
    nullity.push_back(kernels.back().cols());
  }
  if (nullity.back() != alg) {
    throw Error(ErrorCode::kDefectiveStructure,
                "generalized eigenspace dimension " + std::to_string(nullity.back()) +
                    " does not match algebraic multiplicity " + std::to_string(alg) +
                    "; the spectrum is numerically defective, try the exact backend");
  }
  ChainResult<F> out;
  out.sizes = block_sizes_from_nullities(nullity);
  const std::size_t depth = nullity.size() - 1;
  for (std::size_t s = depth; s >= 1; --s) {
    const std::size_t need = static_cast<std::size_t>(std::count(out.sizes.begin(), out.sizes.end(), s));
    if (need == 0) continue;
    Matrix<F> covered = kernels[s - 1];
    for (const auto& c : out.chains) covered = hcat(covered, c.block(0, 0, n, s));
    const Matrix<F> tops = complement_directions(covered, kernels[s], need, tol);
    for (std::size_t t = 0; t < need; ++t) {
      Matrix<F> chain(n, s);
      Matrix<F> v = tops.col(t);
      for (std::size_t k = s; k-- > 0;) {
        chain.set_block(0, k, v);
        v = nmat * v;
      }
      out.chains.push_back(std::move(chain));
    }
  }
  return out;
}

template <class B>
void check_round_trip(const RealMatrixOf<B>& a, const JordanStructure<B>& js, const ToleranceConfig& tol) {
  using C = typename B::Complex;
  const Matrix<C> ac = complexify(a);
  const std::size_t n = a.rows();
  if constexpr (kIsExactBackend<B>) {
    (void)tol;
    if (ac * js.transform != js.transform * js.jordan_matrix() ||
        js.transform * js.transform_inverse != Matrix<C>::identity(n)) {
      throw Error(ErrorCode::kDefectiveStructure, "exact Jordan chain relation violated");
    }
  } else {
    const double scale = std::max(1.0, frobenius_norm(ac));
    for (std::size_t g = 0; g < js.chains.size(); ++g) {
      for (std::size_t j = 0; j < js.chains[g].size(); ++j) {
        const auto& t = js.chains[g][j];
        const Matrix<C> jb = jordan_block(js.eigen.groups[g].value, t.cols());
        const double res = frobenius_norm(ac * t - t * jb);
        if (res > kRoundTripTol * scale * std::max(1.0, frobenius_norm(t))) {
          throw Error(ErrorCode::kDefectiveStructure,
                      "Jordan chain residual " + to_string(res) + " above tolerance; try the exact backend");
        }
      }
    }
    const double inv_res = max_abs(js.transform * js.transform_inverse - Matrix<C>::identity(n));
    const double sim_res = max_abs(js.transform_inverse * ac * js.transform - js.jordan_matrix());
    if (inv_res > kRoundTripTol || sim_res > kRoundTripTol * scale) {
      throw Error(ErrorCode::kDefectiveStructure,
                  "Jordan transform round trip failed (inverse residual " + to_string(inv_res) +
                      ", similarity residual " + to_string(sim_res) + "); try the exact backend");
    }
  }
}

}  // namespace

std::vector<std::size_t> block_sizes_from_nullities(const std::vector<std::size_t>& nullities) {
  if (nullities.empty() || nullities.front() != 0) {
    throw Error(ErrorCode::kInvalidArgument, "nullity sequence must start at 0");
  }
  const std::size_t depth = nullities.size() - 1;
  std::vector<std::size_t> weyr(depth + 2, 0);  // weyr[k] = #blocks of size >= k
  for (std::size_t k = 1; k <= depth; ++k) {
    if (nullities[k] < nullities[k - 1]) {
      throw Error(ErrorCode::kDefectiveStructure, "nullities of powers must be nondecreasing");
    }
    weyr[k] = nullities[k] - nullities[k - 1];
  }
  std::vector<std::size_t> sizes;
  for (std::size_t s = depth; s >= 1; --s) {
    if (weyr[s] < weyr[s + 1]) {
      throw Error(ErrorCode::kDefectiveStructure, "Weyr characteristic is not nonincreasing");
    }
    sizes.insert(sizes.end(), weyr[s] - weyr[s + 1], s);
  }
  return sizes;
}

EigenStructure<FloatBackend> compute_eigenstructure(const RealMatrix& a, const ToleranceConfig& tol) {
  require_square(a.rows(), a.cols());
  tol.validate();
  const std::size_t n = a.rows();
  const std::vector<Complex> raw = raw_eigenvalues(a);

  double radius = 0.0;
  for (const auto& z : raw) radius = std::max(radius, std::abs(z));
  const double merge = tol.eigen_cluster_tol * std::max(1.0, radius);

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(raw[i] - raw[j]) <= merge) parent[find_root(parent, i)] = find_root(parent, j);

  struct Cluster {
    Complex mean{};
    std::size_t count = 0;
    double diameter = 0.0;
  };
  std::vector<Cluster> clusters;
  std::vector<std::size_t> cluster_of(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find_root(parent, i);
    if (cluster_of[r] == n) {
      cluster_of[r] = clusters.size();
      clusters.emplace_back();
    }
    cluster_of[i] = cluster_of[r];
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto& c = clusters[cluster_of[i]];
    c.mean += raw[i];
    ++c.count;
    for (std::size_t j = 0; j < n; ++j)
      if (cluster_of[j] == cluster_of[i]) c.diameter = std::max(c.diameter, std::abs(raw[i] - raw[j]));
  }
  for (auto& c : clusters) {
    c.mean /= static_cast<double>(c.count);
    if (c.diameter > 10.0 * merge) {
      throw SpectrumAmbiguityError("eigenvalue cluster near " + to_string(c.mean.real()) + "+" +
                                       to_string(c.mean.imag()) + "i has diameter " + to_string(c.diameter) +
                                       " exceeding 10x the merge distance " + to_string(merge),
                                   c.diameter);
    }
  }

  const ComplexMatrix ac = complexify(a);
  auto make_group = [&](const Complex& value, EigenKind kind, std::size_t count) {
    EigenvalueGroup<FloatBackend> g;
    g.value = value;
    g.kind = kind;
    g.algebraic_multiplicity = count;
    if (kind == EigenKind::kReal) {
      g.left_basis = complexify(null_space_basis(RealMatrix(-shifted(a.transpose(), value.real())), tol));
    } else {
      g.left_basis = null_space_basis(left_pencil(ac, value), tol);
    }
    g.geometric_multiplicity = g.left_basis.cols();
    if (g.geometric_multiplicity == 0 || g.geometric_multiplicity > count) {
      throw SpectrumAmbiguityError("eigenvalue " + to_string(value.real()) + "+" + to_string(value.imag()) +
                                       "i has numerical geometric multiplicity " +
                                       std::to_string(g.geometric_multiplicity) + " but algebraic multiplicity " +
                                       std::to_string(count),
                                   merge);
    }
    return g;
  };

  std::vector<EigenvalueGroup<FloatBackend>> reals;
  std::vector<EigenvalueGroup<FloatBackend>> reps;
  std::vector<std::size_t> lower;
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    const auto& c = clusters[k];
    if (std::abs(c.mean.imag()) <= tol.realness_tol) {
      reals.push_back(make_group({c.mean.real(), 0.0}, EigenKind::kReal, c.count));
    } else if (c.mean.imag() < 0) {
      lower.push_back(k);
    }
  }
  std::vector<bool> used(clusters.size(), false);
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    const auto& c = clusters[k];
    if (!(c.mean.imag() > tol.realness_tol)) continue;
    std::size_t best = clusters.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t l : lower) {
      const double d = std::abs(clusters[l].mean - std::conj(c.mean));
      if (!used[l] && d < best_dist) {
        best = l;
        best_dist = d;
      }
    }
    if (best == clusters.size() || best_dist > 10.0 * merge || clusters[best].count != c.count) {
      throw SpectrumAmbiguityError("complex eigenvalue cluster without a matching conjugate", best_dist);
    }
    used[best] = true;
    const Complex value{0.5 * (c.mean.real() + clusters[best].mean.real()),
                        0.5 * (c.mean.imag() - clusters[best].mean.imag())};
    reps.push_back(make_group(value, EigenKind::kComplex, c.count));
  }
  for (std::size_t l : lower) {
    if (!used[l]) throw SpectrumAmbiguityError("complex eigenvalue cluster without a matching conjugate", 0.0);
  }

  EigenStructure<FloatBackend> es;
  es.n = n;
  assemble_groups(es, std::move(reals), std::move(reps));
  return es;
}

EigenStructure<ExactBackend> compute_eigenstructure(const RationalMatrix& a, const ToleranceConfig& tol) {
  require_square(a.rows(), a.cols());
  const std::size_t n = a.rows();
  const auto roots = certify_roots(characteristic_polynomial(a), raw_eigenvalues(to_floating_real(a)));
  if (!roots) {
    throw IrrationalSpectrumError("characteristic polynomial has roots outside Q(i)");
  }
  const GaussMatrix ac = complexify(a);
  std::vector<EigenvalueGroup<ExactBackend>> reals;
  std::vector<EigenvalueGroup<ExactBackend>> reps;
  for (const auto& root : *roots) {
    EigenvalueGroup<ExactBackend> g;
    g.value = root.value;
    g.algebraic_multiplicity = root.multiplicity;
    if (root.value.is_real()) {
      g.kind = EigenKind::kReal;
      g.left_basis = complexify(null_space_basis(RationalMatrix(-shifted(a.transpose(), root.value.real())), tol));
    } else {
      g.kind = EigenKind::kComplex;
      g.left_basis = null_space_basis(left_pencil(ac, root.value), tol);
    }
    g.geometric_multiplicity = g.left_basis.cols();
    (g.kind == EigenKind::kReal ? reals : reps).push_back(std::move(g));
  }
  EigenStructure<ExactBackend> es;
  es.n = n;
  assemble_groups(es, std::move(reals), std::move(reps));
  return es;
}

std::size_t geometric_multiplicity(const RealMatrix& a, const Complex& lambda, const ToleranceConfig& tol) {
  require_square(a.rows(), a.cols());
  const std::size_t p = a.rows() - rank(left_pencil(complexify(a), lambda), tol);
  if (p == 0) throw Error(ErrorCode::kNotAnEigenvalue, "value is not an eigenvalue of A");
  return p;
}

std::size_t geometric_multiplicity(const RationalMatrix& a, const GaussRational& lambda, const ToleranceConfig& tol) {
  require_square(a.rows(), a.cols());
  const std::size_t p = a.rows() - rank(left_pencil(complexify(a), lambda), tol);
  if (p == 0) throw Error(ErrorCode::kNotAnEigenvalue, "value is not an eigenvalue of A");
  return p;
}

ComplexMatrix left_eigenbasis(const RealMatrix& a, const Complex& lambda, const ToleranceConfig& tol) {
  require_square(a.rows(), a.cols());
  return null_space_basis(left_pencil(complexify(a), lambda), tol);
}

GaussMatrix left_eigenbasis(const RationalMatrix& a, const GaussRational& lambda, const ToleranceConfig& tol) {
  require_square(a.rows(), a.cols());
  return null_space_basis(left_pencil(complexify(a), lambda), tol);
}

template <class B>
JordanStructure<B> jordan_structure(const RealMatrixOf<B>& a, const EigenStructure<B>& eigen,
                                    const ToleranceConfig& tol) {
  using R = typename B::Real;
  using C = typename B::Complex;
  require_square(a.rows(), a.cols());
  if (a.rows() != eigen.n) throw Error(ErrorCode::kInvalidArgument, "eigenstructure does not match A");

  JordanStructure<B> js;
  js.eigen = eigen;
  const std::size_t k = eigen.groups.size();
  js.block_sizes.resize(k);
  js.chains.resize(k);
  const Matrix<C> ac = complexify(a);

  for (std::size_t g = 0; g < k; ++g) {
    const auto& grp = eigen.groups[g];
    if (grp.kind == EigenKind::kComplex && !grp.representative) continue;
    if (grp.kind == EigenKind::kReal) {
      const R lambda = R(real_part(grp.value));
      auto res = build_chains(shifted(a, lambda), grp.algebraic_multiplicity, tol);
      js.block_sizes[g] = res.sizes;
      for (auto& c : res.chains) js.chains[g].push_back(complexify(c));
    } else {
      auto res = build_chains(shifted(ac, grp.value), grp.algebraic_multiplicity, tol);
      js.block_sizes[g] = res.sizes;
      js.chains[g] = std::move(res.chains);
    }
    if (js.block_sizes[g].size() != grp.geometric_multiplicity) {
      throw Error(ErrorCode::kDefectiveStructure,
                  "Jordan block count " + std::to_string(js.block_sizes[g].size()) +
                      " differs from geometric multiplicity " + std::to_string(grp.geometric_multiplicity) +
                      "; try the exact backend");
    }
  }
  for (std::size_t g = 0; g < k; ++g) {
    const auto& grp = eigen.groups[g];
    if (grp.kind != EigenKind::kComplex || grp.representative) continue;
    const std::size_t rep = *grp.conjugate_partner;
    js.block_sizes[g] = js.block_sizes[rep];
    for (const auto& c : js.chains[rep]) js.chains[g].push_back(c.conjugate());
  }

  js.transform = Matrix<C>(a.rows(), 0);
  for (std::size_t g = 0; g < k; ++g) js.transform = hcat(js.transform, js.group_chains(g));
  try {
    js.transform_inverse = inverse(js.transform, tol);
  } catch (const Error&) {
    throw Error(ErrorCode::kDefectiveStructure, "assembled Jordan transform is singular; try the exact backend");
  }
  check_round_trip(a, js, tol);
  return js;
}

template <class B>
std::size_t JordanStructure<B>::group_size(std::size_t group) const {
  return std::accumulate(block_sizes.at(group).begin(), block_sizes.at(group).end(), std::size_t{0});
}

template <class B>
std::size_t JordanStructure<B>::group_offset(std::size_t group) const {
  std::size_t off = 0;
  for (std::size_t g = 0; g < group; ++g) off += group_size(g);
  return off;
}

template <class B>
ComplexMatrixOf<B> JordanStructure<B>::group_chains(std::size_t group) const {
  ComplexMatrixOf<B> out(eigen.n, 0);
  for (const auto& c : chains.at(group)) out = hcat(out, c);
  return out;
}

template <class B>
ComplexMatrixOf<B> JordanStructure<B>::jordan_matrix() const {
  std::vector<ComplexMatrixOf<B>> blocks;
  for (std::size_t g = 0; g < block_sizes.size(); ++g)
    for (auto m : block_sizes[g]) blocks.push_back(jordan_block(eigen.groups[g].value, m));
  return block_diag(blocks);
}

EigenStructure<FloatBackend> to_floating(const EigenStructure<ExactBackend>& e) {
  EigenStructure<FloatBackend> out;
  out.n = e.n;
  out.k_r = e.k_r;
  out.k_c = e.k_c;
  out.p_max = e.p_max;
  out.min_gap = e.min_gap;
  out.warnings = e.warnings;
  for (const auto& g : e.groups) {
    EigenvalueGroup<FloatBackend> f;
    f.value = to_floating(g.value);
    f.kind = g.kind;
    f.algebraic_multiplicity = g.algebraic_multiplicity;
    f.geometric_multiplicity = g.geometric_multiplicity;
    f.left_basis = to_floating(g.left_basis);
    f.conjugate_partner = g.conjugate_partner;
    f.representative = g.representative;
    out.groups.push_back(std::move(f));
  }
  return out;
}

template struct JordanStructure<FloatBackend>;
template struct JordanStructure<ExactBackend>;
template JordanStructure<FloatBackend> jordan_structure<FloatBackend>(const RealMatrix&,
                                                                      const EigenStructure<FloatBackend>&,
                                                                      const ToleranceConfig&);
template JordanStructure<ExactBackend> jordan_structure<ExactBackend>(const RationalMatrix&,
                                                                      const EigenStructure<ExactBackend>&,
                                                                      const ToleranceConfig&);

}  // namespace minctrl
