#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "minctrl/errors.hpp"
#include "minctrl/matrix.hpp"

namespace minctrl {

/// Malformed matrix file; line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, std::size_t column, const std::string& message)
      : Error(ErrorCode::kParse, source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct MatrixEntry {
  double value = 0.0;
  /// Set when the literal is an integer, a "p/q" string, or a float whose
  /// shortest rational rounding has denominator at most 10^6.
  std::optional<Rational> exact;
  bool rational_string = false;
};

struct MatrixFile {
  enum class Format { kJson, kPlainText };

  Format format = Format::kJson;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<MatrixEntry> entries;

  bool exact_representable() const;
  bool has_rational_strings() const;
  RealMatrix to_real() const;
  /// Throws Error(kInvalidArgument) if some entry has no exact value.
  RationalMatrix to_rational() const;
  /// Entry-wise canonical text ("p/q" when exact, else %.17g), shape first.
  std::string canonical() const;
};

/// Detects the format from the first non-blank character ('{' means JSON).
/// `source` names the input in error messages.
MatrixFile parse_matrix(const std::string& text, const std::string& source = "<input>");
MatrixFile read_matrix_file(const std::string& path);

/// JSON matrix document: integers as numbers, other rationals as "p/q".
std::string format_matrix_json(const RationalMatrix& m);
std::string format_matrix_json(const RealMatrix& m);

/// 64-bit FNV-1a, rendered as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace minctrl
