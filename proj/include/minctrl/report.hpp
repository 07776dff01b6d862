#pragma once

#include <json.hpp>

#include "minctrl/spectral.hpp"
#include "minctrl/verify.hpp"

namespace minctrl {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Integers as numbers, other rationals as "p/q" strings.
Json scalar_json(const Rational& x);
Json scalar_json(double x);
/// {"re": ..., "im": ...}
Json scalar_json(const GaussRational& z);
Json scalar_json(const Complex& z);

Json matrix_json(const RationalMatrix& m);
Json matrix_json(const RealMatrix& m);
Json matrix_json(const GaussMatrix& m);
Json matrix_json(const ComplexMatrix& m);

Json tolerance_json(const ToleranceConfig& tol);

/// Groups with multiplicities (and block sizes when `js` is given), p_max and
/// the smallest gap between distinct eigenvalues.
template <class B>
Json eigen_json(const EigenStructure<B>& eigen, const JordanStructure<B>* js);

template <class B>
Json verify_json(const VerifyReport<B>& rep);

}  // namespace minctrl
