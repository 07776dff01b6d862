#pragma once

#include "minctrl/matrix.hpp"

namespace minctrl {

/// Double-precision arithmetic with tolerance-based rank decisions.
struct FloatBackend {
  using Real = double;
  using Complex = minctrl::Complex;
  static constexpr const char* kName = "float";
};

/// Exact arithmetic over Q (real data) and Q(i) (complex data).
struct ExactBackend {
  using Real = Rational;
  using Complex = GaussRational;
  static constexpr const char* kName = "exact";
};

template <class B>
using RealMatrixOf = Matrix<typename B::Real>;

template <class B>
using ComplexMatrixOf = Matrix<typename B::Complex>;

template <class B>
inline constexpr bool kIsExactBackend = kIsExact<typename B::Real>;

}  // namespace minctrl
