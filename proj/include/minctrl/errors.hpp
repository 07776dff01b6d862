#pragma once

#include <stdexcept>
#include <string>

namespace minctrl {

enum class ErrorCode {
  kInvalidArgument,
  kParse,
  kNoSolution,
  kNotAnEigenvalue,
  kSpectrumAmbiguity,
  kDefectiveStructure,
  kIrrationalSpectrum,
  kRealness,
  kVerification,
  kRejectionBudget,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Linear system with no solution; carries the least-squares residual norm.
class NoSolutionError : public Error {
 public:
  NoSolutionError(const std::string& what, double residual)
      : Error(ErrorCode::kNoSolution, what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Eigenvalue clustering could not separate the spectrum cleanly.
class SpectrumAmbiguityError : public Error {
 public:
  SpectrumAmbiguityError(const std::string& what, double gap)
      : Error(ErrorCode::kSpectrumAmbiguity, what), gap_(gap) {}
  double gap() const noexcept { return gap_; }

 private:
  double gap_;
};

}  // namespace minctrl
