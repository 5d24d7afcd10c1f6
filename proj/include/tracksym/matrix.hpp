#pragma once

#include "tracksym/rational.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace tracksym {

// Small dense matrix, row-major. Used both in exact rational mode and in
// binary64 mode; elimination routines below are deterministic so that exact
// results are reproducible across runs and platforms.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T value = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, value) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  static Matrix diagonal(const std::vector<T>& entries) {
    Matrix m(entries.size(), entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  bool operator==(const Matrix&) const = default;

  Matrix operator+(const Matrix& other) const {
    require_same_shape(other);
    Matrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += other.data_[i];
    return out;
  }

  Matrix operator-(const Matrix& other) const {
    require_same_shape(other);
    Matrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= other.data_[i];
    return out;
  }

  Matrix operator*(const Matrix& other) const {
    if (cols_ != other.rows_) throw std::invalid_argument("matrix shape mismatch in product");
    Matrix out(rows_, other.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t k = 0; k < cols_; ++k) {
        const T& a = (*this)(i, k);
        if (a == T{}) continue;
        for (std::size_t j = 0; j < other.cols_; ++j) {
          out(i, j) += a * other(k, j);
        }
      }
    }
    return out;
  }

  Matrix operator*(const T& scalar) const {
    Matrix out = *this;
    for (auto& v : out.data_) v *= scalar;
    return out;
  }

  Matrix transpose() const {
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  T trace() const {
    if (!square()) throw std::invalid_argument("trace of non-square matrix");
    T t{};
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
  }

 private:
  void require_same_shape(const Matrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
      throw std::invalid_argument("matrix shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

inline double frobenius_norm(const Matrix<double>& m) {
  double sum = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) sum += m(i, j) * m(i, j);
  return std::sqrt(sum);
}

// Reduced row echelon form over Q. Pivot search is first-nonzero in column
// order, so the result is a canonical form of the row space.
inline std::size_t rref_in_place(Matrix<Rational>& m,
                                 std::vector<std::size_t>* pivot_cols = nullptr) {
  std::size_t rank = 0;
  for (std::size_t col = 0; col < m.cols() && rank < m.rows(); ++col) {
    std::size_t pivot = rank;
    while (pivot < m.rows() && m(pivot, col) == 0) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != rank) {
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(pivot, j), m(rank, j));
    }
    const Rational inv = Rational(1) / m(rank, col);
    for (std::size_t j = col; j < m.cols(); ++j) m(rank, j) *= inv;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == rank || m(r, col) == 0) continue;
      const Rational factor = m(r, col);
      for (std::size_t j = col; j < m.cols(); ++j) {
        m(r, j) -= factor * m(rank, j);
      }
    }
    if (pivot_cols) pivot_cols->push_back(col);
    ++rank;
  }
  return rank;
}

inline std::size_t matrix_rank(Matrix<Rational> m) { return rref_in_place(m); }

// Basis of the null space, one vector per free column in increasing column
// order, with a unit entry at the free column.
inline std::vector<std::vector<Rational>> kernel_basis(Matrix<Rational> m) {
  std::vector<std::size_t> pivots;
  const std::size_t rank = rref_in_place(m, &pivots);
  std::vector<bool> is_pivot(m.cols(), false);
  for (std::size_t p : pivots) is_pivot[p] = true;

  std::vector<std::vector<Rational>> basis;
  for (std::size_t free_col = 0; free_col < m.cols(); ++free_col) {
    if (is_pivot[free_col]) continue;
    std::vector<Rational> v(m.cols(), Rational(0));
    v[free_col] = 1;
    for (std::size_t r = 0; r < rank; ++r) {
      v[pivots[r]] = -m(r, free_col);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

// Gauss-Jordan inverse. Exact for rational scalars; binary64 uses partial
// pivoting by magnitude.
template <class T>
Matrix<T> inverse(const Matrix<T>& input) {
  if (!input.square()) throw std::invalid_argument("inverse of non-square matrix");
  const std::size_t n = input.rows();
  Matrix<T> m = input;
  Matrix<T> inv = Matrix<T>::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    if constexpr (std::is_floating_point_v<T>) {
      for (std::size_t r = col + 1; r < n; ++r) {
        if (std::abs(m(r, col)) > std::abs(m(pivot, col))) pivot = r;
      }
      if (m(pivot, col) == 0.0) throw std::domain_error("singular matrix");
    } else {
      while (pivot < n && m(pivot, col) == T{}) ++pivot;
      if (pivot == n) throw std::domain_error("singular matrix");
    }
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(m(pivot, j), m(col, j));
        std::swap(inv(pivot, j), inv(col, j));
      }
    }
    const T scale = T(1) / m(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      m(col, j) *= scale;
      inv(col, j) *= scale;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m(r, col) == T{}) continue;
      const T factor = m(r, col);
      for (std::size_t j = 0; j < n; ++j) {
        m(r, j) -= factor * m(col, j);
        inv(r, j) -= factor * inv(col, j);
      }
    }
  }
  return inv;
}

inline Matrix<double> to_double_matrix(const Matrix<Rational>& m) {
  Matrix<double> out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = to_double(m(i, j));
  return out;
}

}  // namespace tracksym
