#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include "minctrl/errors.hpp"
#include "minctrl/scalar.hpp"

namespace minctrl {

/// Dense row-major matrix over one of the supported scalar fields.
///
/// Values are immutable in spirit: every algorithm takes matrices by const
/// reference and returns new ones. Zero-sized shapes are allowed so that an
/// empty null-space basis (n x 0) is representable.
template <class T>
class Matrix {
 public:
  using Scalar = T;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw Error(ErrorCode::kInvalidArgument, "matrix data length does not match rows * cols");
    }
  }
  Matrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) {
        throw Error(ErrorCode::kInvalidArgument, "ragged matrix initializer");
      }
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  static Matrix diagonal(const std::vector<T>& d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }
  bool is_square() const noexcept { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const std::vector<T>& data() const noexcept { return data_; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  /// Conjugate transpose; equals transpose() on real fields.
  Matrix adjoint() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = minctrl::conj((*this)(i, j));
    return t;
  }

  Matrix conjugate() const {
    Matrix c(rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) c.data_[k] = minctrl::conj(data_[k]);
    return c;
  }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) {
      throw Error(ErrorCode::kInvalidArgument, "block out of range");
    }
    Matrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }

  Matrix col(std::size_t j) const { return block(0, j, rows_, 1); }
  Matrix row(std::size_t i) const { return block(i, 0, 1, cols_); }

  void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) {
      throw Error(ErrorCode::kInvalidArgument, "set_block out of range");
    }
    for (std::size_t i = 0; i < b.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }

  Matrix& operator+=(const Matrix& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix& operator*=(const T& s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const T& s) { return a *= s; }
  friend Matrix operator*(const T& s, Matrix a) { return a *= s; }
  friend Matrix operator-(Matrix a) {
    for (auto& v : a.data_) v = -v;
    return a;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) {
      throw Error(ErrorCode::kInvalidArgument, "matrix product shape mismatch");
    }
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if constexpr (kIsExact<T>) {
          if (is_exact_zero(aik)) continue;
        }
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    }
    return c;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

 private:
  void require_same_shape(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) {
      throw Error(ErrorCode::kInvalidArgument, "matrix shape mismatch");
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RealMatrix = Matrix<double>;
using ComplexMatrix = Matrix<Complex>;
using RationalMatrix = Matrix<Rational>;
using GaussMatrix = Matrix<GaussRational>;

/// Elementwise conversion between scalar fields.
template <class U, class T, class F>
Matrix<U> map(const Matrix<T>& m, F&& f) {
  std::vector<U> out;
  out.reserve(m.size());
  for (const auto& v : m.data()) out.push_back(f(v));
  return Matrix<U>(m.rows(), m.cols(), std::move(out));
}

template <class T>
auto complexify(const Matrix<T>& m) {
  using C = typename ScalarTraits<T>::ComplexType;
  return map<C>(m, [](const T& v) { return to_complex(v); });
}

template <class T>
auto real_part(const Matrix<T>& m) {
  using R = typename ScalarTraits<T>::RealType;
  return map<R>(m, [](const T& v) { return R(minctrl::real_part(v)); });
}

template <class T>
auto imag_part(const Matrix<T>& m) {
  using R = typename ScalarTraits<T>::RealType;
  return map<R>(m, [](const T& v) { return R(minctrl::imag_part(v)); });
}

/// Floating image of an exact (or floating) matrix.
template <class T>
ComplexMatrix to_floating(const Matrix<T>& m) {
  return map<Complex>(m, [](const T& v) { return minctrl::to_floating(v); });
}

template <class T>
RealMatrix to_floating_real(const Matrix<T>& m) {
  return map<double>(m, [](const T& v) { return minctrl::to_floating(v).real(); });
}

template <class T>
Matrix<T> hcat(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows()) {
    if (a.cols() == 0) return b;
    if (b.cols() == 0) return a;
    throw Error(ErrorCode::kInvalidArgument, "hcat row mismatch");
  }
  Matrix<T> c(a.rows(), a.cols() + b.cols());
  c.set_block(0, 0, a);
  c.set_block(0, a.cols(), b);
  return c;
}

template <class T>
Matrix<T> vcat(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.cols()) {
    if (a.rows() == 0) return b;
    if (b.rows() == 0) return a;
    throw Error(ErrorCode::kInvalidArgument, "vcat column mismatch");
  }
  Matrix<T> c(a.rows() + b.rows(), a.cols());
  c.set_block(0, 0, a);
  c.set_block(a.rows(), 0, b);
  return c;
}

template <class T>
Matrix<T> block_diag(const std::vector<Matrix<T>>& blocks) {
  std::size_t r = 0;
  std::size_t c = 0;
  for (const auto& b : blocks) {
    r += b.rows();
    c += b.cols();
  }
  Matrix<T> out(r, c);
  r = c = 0;
  for (const auto& b : blocks) {
    out.set_block(r, c, b);
    r += b.rows();
    c += b.cols();
  }
  return out;
}

/// m x m Jordan block: value on the diagonal, ones on the superdiagonal.
template <class T>
Matrix<T> jordan_block(const T& value, std::size_t m) {
  Matrix<T> j(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    j(i, i) = value;
    if (i + 1 < m) j(i, i + 1) = T(1);
  }
  return j;
}

/// Frobenius norm as a double (for tolerance scaling and diagnostics).
template <class T>
double frobenius_norm(const Matrix<T>& m) {
  double s = 0.0;
  for (const auto& v : m.data()) {
    const double a = magnitude(v);
    s += a * a;
  }
  return std::sqrt(s);
}

template <class T>
double max_abs(const Matrix<T>& m) {
  double s = 0.0;
  for (const auto& v : m.data()) s = std::max(s, magnitude(v));
  return s;
}

/// Largest |imaginary part| of any entry.
template <class T>
double max_imag(const Matrix<T>& m) {
  double s = 0.0;
  for (const auto& v : m.data()) s = std::max(s, magnitude(minctrl::imag_part(v)));
  return s;
}

}  // namespace minctrl
