#include "minctrl/report.hpp"

#include <cmath>

namespace minctrl {
namespace {

template <class T>
Json matrix_json_impl(const Matrix<T>& m) {
  Json doc;
  doc["rows"] = m.rows();
  doc["cols"] = m.cols();
  Json data = Json::array();
  for (const auto& v : m.data()) data.push_back(scalar_json(v));
  doc["data"] = std::move(data);
  return doc;
}

}  // namespace

Json scalar_json(const Rational& x) {
  if (x.get_den() == 1 && x.get_num().fits_slong_p()) return x.get_num().get_si();
  return to_string(x);
}

Json scalar_json(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x == 0.0 ? 0.0 : x;
}

Json scalar_json(const GaussRational& z) {
  return Json{{"re", scalar_json(z.real())}, {"im", scalar_json(z.imag())}};
}

Json scalar_json(const Complex& z) {
  return Json{{"re", scalar_json(z.real())}, {"im", scalar_json(z.imag())}};
}

Json matrix_json(const RationalMatrix& m) { return matrix_json_impl(m); }
Json matrix_json(const RealMatrix& m) { return matrix_json_impl(m); }
Json matrix_json(const GaussMatrix& m) { return matrix_json_impl(m); }
Json matrix_json(const ComplexMatrix& m) { return matrix_json_impl(m); }

Json tolerance_json(const ToleranceConfig& tol) {
  return Json{{"eigen_cluster_tol", tol.eigen_cluster_tol},
              {"rank_tol", tol.rank_tol},
              {"realness_tol", tol.realness_tol}};
}

template <class B>
Json eigen_json(const EigenStructure<B>& eigen, const JordanStructure<B>* js) {
  Json doc;
  doc["n"] = eigen.n;
  doc["k_r"] = eigen.k_r;
  doc["k_c"] = eigen.k_c;
  Json groups = Json::array();
  for (std::size_t g = 0; g < eigen.groups.size(); ++g) {
    const auto& grp = eigen.groups[g];
    Json j;
    j["value"] = scalar_json(grp.value);
    j["kind"] = grp.kind == EigenKind::kReal ? "real" : "complex";
    j["algebraic"] = grp.algebraic_multiplicity;
    j["geometric"] = grp.geometric_multiplicity;
    if (grp.conjugate_partner) j["conjugate_partner"] = *grp.conjugate_partner;
    if (js) j["block_sizes"] = js->block_sizes[g];
    groups.push_back(std::move(j));
  }
  doc["groups"] = std::move(groups);
  doc["p_max"] = eigen.p_max;
  doc["min_gap"] = scalar_json(eigen.min_gap);
  return doc;
}

template <class B>
Json verify_json(const VerifyReport<B>& rep) {
  Json doc;
  doc["verdict"] = to_string(rep.verdict);
  doc["n"] = rep.n;
  Json pbh = Json::array();
  for (std::size_t g = 0; g < rep.ranks.size(); ++g) {
    const auto& r = rep.ranks[g];
    pbh.push_back(Json{{"eigenvalue", scalar_json(r.eigenvalue)},
                       {"geometric", r.geometric_multiplicity},
                       {"pencil_rank", r.pencil_rank},
                       {"eigenvector_rank", r.eigenvector_rank},
                       {"lemma2_fcr", static_cast<bool>(rep.lemma2[g])}});
  }
  doc["pbh"] = std::move(pbh);
  doc["kalman"] = Json{{"rank", rep.kalman.rank}, {"near_threshold", rep.kalman.near_threshold}};
  Json witnesses = Json::array();
  for (const auto& w : rep.witnesses) {
    Json v = Json::array();
    for (const auto& x : w.vector.data()) v.push_back(scalar_json(x));
    witnesses.push_back(Json{{"eigenvalue", scalar_json(w.eigenvalue)}, {"vector", std::move(v)}});
  }
  doc["witnesses"] = std::move(witnesses);
  return doc;
}

template Json eigen_json<FloatBackend>(const EigenStructure<FloatBackend>&, const JordanStructure<FloatBackend>*);
template Json eigen_json<ExactBackend>(const EigenStructure<ExactBackend>&, const JordanStructure<ExactBackend>*);
template Json verify_json<FloatBackend>(const VerifyReport<FloatBackend>&);
template Json verify_json<ExactBackend>(const VerifyReport<ExactBackend>&);

}  // namespace minctrl
