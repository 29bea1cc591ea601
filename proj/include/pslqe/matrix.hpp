#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

#include "pslqe/numerics.hpp"

namespace pslqe {

/// Dense row-major matrix with 0-based indexing.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  T& operator()(std::size_t i, std::size_t j) {
    assert(i < rows_ && j < cols_);
    return data_[i * cols_ + j];
  }
  const T& operator()(std::size_t i, std::size_t j) const {
    assert(i < rows_ && j < cols_);
    return data_[i * cols_ + j];
  }

  void swap_rows(std::size_t a, std::size_t b) {
    for (std::size_t k = 0; k < cols_; ++k) std::swap((*this)(a, k), (*this)(b, k));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    for (std::size_t k = 0; k < rows_; ++k) std::swap((*this)(k, a), (*this)(k, b));
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RealMatrix = Matrix<Real>;
using IntMatrix = Matrix<BigInt>;

inline IntMatrix identity_int(std::size_t n) {
  IntMatrix out(n, n, BigInt(0));
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1;
  return out;
}

inline RealMatrix identity_real(std::size_t n, const PrecisionContext& ctx) {
  RealMatrix out(n, n, Real(ctx));
  for (std::size_t i = 0; i < n; ++i) out(i, i) = Real(1L, ctx);
  return out;
}

inline IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
  assert(a.cols() == b.rows());
  IntMatrix out(a.rows(), b.cols(), BigInt(0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += a(i, k) * b(k, j);
    }
  return out;
}

inline RealMatrix multiply(const RealMatrix& a, const RealMatrix& b) {
  assert(a.cols() == b.rows() && a.rows() > 0);
  const PrecisionContext ctx = a(0, 0).context();
  RealMatrix out(a.rows(), b.cols(), Real(ctx));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Real acc(ctx);
      for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
      out(i, j) = std::move(acc);
    }
  return out;
}

/// Integer matrix times real matrix.
inline RealMatrix multiply(const IntMatrix& a, const RealMatrix& b) {
  assert(a.cols() == b.rows() && b.rows() > 0);
  const PrecisionContext ctx = b(0, 0).context();
  RealMatrix out(a.rows(), b.cols(), Real(ctx));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      const Real factor(a(i, k), ctx);
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += factor * b(k, j);
    }
  return out;
}

inline RealMatrix transpose(const RealMatrix& a) {
  RealMatrix out(a.cols(), a.rows(), a(0, 0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

/// Frobenius norm of a - b.
inline Real frobenius_distance(const RealMatrix& a, const RealMatrix& b) {
  assert(a.rows() == b.rows() && a.cols() == b.cols());
  Real acc(a(0, 0).context());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      Real d = a(i, j) - b(i, j);
      acc += d * d;
    }
  return sqrt(acc);
}

inline Real frobenius_norm(const RealMatrix& a) {
  Real acc(a(0, 0).context());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * a(i, j);
  return sqrt(acc);
}

/// Exact determinant by fraction-free (Bareiss) elimination.
inline BigInt determinant(IntMatrix m) {
  const std::size_t n = m.rows();
  assert(n == m.cols());
  if (n == 0) return 1;
  BigInt sign = 1;
  BigInt prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      m.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j));
        mpz_divexact(m(i, j).get_mpz_t(), m(i, j).get_mpz_t(), prev.get_mpz_t());
      }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

}  // namespace pslqe
