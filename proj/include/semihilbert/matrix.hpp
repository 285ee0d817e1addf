#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "semihilbert/error.hpp"

namespace semihilbert {

using cplx = std::complex<double>;
using Vector = std::vector<cplx>;

/// Dense row-major complex matrix. Small sizes only (n <= ~64).
class ComplexMatrix {
 public:
  ComplexMatrix() : ComplexMatrix(1, 1) {}

  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {
    if (rows == 0 || cols == 0) {
      throw Error(ErrorKind::InvalidArgument, "matrix dimensions must be positive");
    }
  }

  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (rows == 0 || cols == 0) {
      throw Error(ErrorKind::InvalidArgument, "matrix dimensions must be positive");
    }
    if (data_.size() != rows * cols) {
      throw Error(ErrorKind::DimensionMismatch, "entry count does not match rows*cols");
    }
    if (!all_finite()) {
      throw Error(ErrorKind::InvalidArgument, "matrix entries must be finite");
    }
  }

  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    if (rows_ == 0 || cols_ == 0) {
      throw Error(ErrorKind::InvalidArgument, "matrix dimensions must be positive");
    }
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) {
        throw Error(ErrorKind::DimensionMismatch, "ragged matrix literal");
      }
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
  }

  static ComplexMatrix diagonal(std::initializer_list<double> values) {
    return diagonal(std::span<const double>(values.begin(), values.size()));
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const cplx> data() const noexcept { return data_; }
  std::span<cplx> data() noexcept { return data_; }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const cplx& z) {
      return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
  }

  ComplexMatrix adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
  }

  Vector column(std::size_t j) const {
    Vector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  ComplexMatrix& operator+=(const ComplexMatrix& rhs) {
    require_same_shape(rhs);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
    return *this;
  }

  ComplexMatrix& operator-=(const ComplexMatrix& rhs) {
    require_same_shape(rhs);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
    return *this;
  }

  ComplexMatrix& operator*=(cplx s) {
    for (auto& z : data_) z *= s;
    return *this;
  }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  void require_same_shape(const ComplexMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) {
      throw Error(ErrorKind::DimensionMismatch, "matrix shapes differ");
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

inline ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
inline ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
inline ComplexMatrix operator*(ComplexMatrix m, cplx s) { return m *= s; }
inline ComplexMatrix operator*(cplx s, ComplexMatrix m) { return m *= s; }
inline ComplexMatrix operator-(ComplexMatrix m) { return m *= -1.0; }

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "inner dimensions differ in product");
  }
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

inline Vector operator*(const ComplexMatrix& a, std::span<const cplx> x) {
  if (a.cols() != x.size()) {
    throw Error(ErrorKind::DimensionMismatch, "matrix-vector dimension mismatch");
  }
  Vector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    cplx acc{};
    for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

inline ComplexMatrix power(const ComplexMatrix& m, unsigned exponent) {
  if (!m.is_square()) throw Error(ErrorKind::NonSquare, "power of a non-square matrix");
  ComplexMatrix out = ComplexMatrix::identity(m.rows());
  for (unsigned k = 0; k < exponent; ++k) out = out * m;
  return out;
}

inline double frobenius_norm(const ComplexMatrix& m) {
  double acc = 0.0;
  for (const auto& z : m.data()) acc += std::norm(z);
  return std::sqrt(acc);
}

/// Standard inner product, linear in the first argument: sum x_i conj(y_i).
inline cplx inner(std::span<const cplx> x, std::span<const cplx> y) {
  if (x.size() != y.size()) throw Error(ErrorKind::DimensionMismatch, "vector lengths differ");
  cplx acc{};
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * std::conj(y[i]);
  return acc;
}

inline double norm(std::span<const cplx> x) {
  double acc = 0.0;
  for (const auto& z : x) acc += std::norm(z);
  return std::sqrt(acc);
}

/// ||M - M*||_F, zero for Hermitian input.
inline double hermitian_defect(const ComplexMatrix& m) {
  double acc = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) acc += std::norm(m(i, j) - std::conj(m(j, i)));
  return std::sqrt(acc);
}

/// (M + M*) / 2, exactly Hermitian.
inline ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
  return out;
}

}  // namespace semihilbert
