// Small dense linear algebra over either scalar mode.
//
// Everything here works on matrices of size at most a few dozen, with exact
// Gaussian elimination in rational mode and partial pivoting in float mode.

#ifndef G2LAB_LINALG_HPP
#define G2LAB_LINALG_HPP

#include <cassert>
#include <optional>
#include <utility>
#include <vector>

#include "scalar.hpp"

namespace g2lab {

template <class S>
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, S(0)) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = S(1);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  S& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  const S& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend Matrix operator*(const Matrix& x, const Matrix& y) {
    assert(x.cols_ == y.rows_);
    Matrix r(x.rows_, y.cols_);
    for (int i = 0; i < x.rows_; ++i)
      for (int k = 0; k < x.cols_; ++k) {
        const S& v = x(i, k);
        if (v == S(0)) continue;
        for (int j = 0; j < y.cols_; ++j) r(i, j) += v * y(k, j);
      }
    return r;
  }

  friend Matrix operator+(const Matrix& x, const Matrix& y) {
    assert(x.rows_ == y.rows_ && x.cols_ == y.cols_);
    Matrix r = x;
    for (size_t i = 0; i < r.a_.size(); ++i) r.a_[i] += y.a_[i];
    return r;
  }

  friend Matrix operator-(const Matrix& x, const Matrix& y) {
    assert(x.rows_ == y.rows_ && x.cols_ == y.cols_);
    Matrix r = x;
    for (size_t i = 0; i < r.a_.size(); ++i) r.a_[i] -= y.a_[i];
    return r;
  }

  friend Matrix operator*(const S& c, const Matrix& x) {
    Matrix r = x;
    for (auto& v : r.a_) v = c * v;
    return r;
  }

  bool operator==(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }

 private:
  int rows_, cols_;
  std::vector<S> a_;
};

namespace detail {
template <class S>
int pivot_row(const Matrix<S>& m, int col, int from) {
  if constexpr (scalar_traits<S>::exact) {
    for (int i = from; i < m.rows(); ++i)
      if (m(i, col) != S(0)) return i;
    return -1;
  } else {
    int best = -1;
    S best_abs(0);
    for (int i = from; i < m.rows(); ++i) {
      S a = scalar_traits<S>::abs(m(i, col));
      if (a > best_abs) {
        best_abs = a;
        best = i;
      }
    }
    if (best >= 0 && best_abs <= S(1e-13)) return -1;
    return best;
  }
}
}  // namespace detail

/// Row-reduce in place; returns the pivot columns.
template <class S>
std::vector<int> rref(Matrix<S>& m) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
    int p = detail::pivot_row(m, col, row);
    if (p < 0) continue;
    if (p != row)
      for (int j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(row, j));
    S inv = S(1) / m(row, col);
    for (int j = 0; j < m.cols(); ++j) m(row, j) = m(row, j) * inv;
    for (int i = 0; i < m.rows(); ++i) {
      if (i == row) continue;
      S f = m(i, col);
      if (f == S(0)) continue;
      for (int j = 0; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

/// Basis of the null space (as columns of the result).
template <class S>
Matrix<S> kernel_basis(Matrix<S> m) {
  const int n = m.cols();
  std::vector<int> pivots = rref(m);
  std::vector<bool> is_pivot(n, false);
  for (int c : pivots) is_pivot[c] = true;
  std::vector<int> free_cols;
  for (int c = 0; c < n; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  Matrix<S> basis(n, static_cast<int>(free_cols.size()));
  for (size_t f = 0; f < free_cols.size(); ++f) {
    basis(free_cols[f], static_cast<int>(f)) = S(1);
    for (size_t r = 0; r < pivots.size(); ++r) basis(pivots[r], static_cast<int>(f)) = -m(static_cast<int>(r), free_cols[f]);
  }
  return basis;
}

template <class S>
S determinant(Matrix<S> m) {
  assert(m.rows() == m.cols());
  S det(1);
  for (int col = 0; col < m.cols(); ++col) {
    int p = detail::pivot_row(m, col, col);
    if (p < 0) return S(0);
    if (p != col) {
      for (int j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(col, j));
      det = -det;
    }
    det = det * m(col, col);
    S inv = S(1) / m(col, col);
    for (int i = col + 1; i < m.rows(); ++i) {
      S f = m(i, col) * inv;
      if (f == S(0)) continue;
      for (int j = col; j < m.cols(); ++j) m(i, j) -= f * m(col, j);
    }
  }
  return det;
}

/// Solve m x = b exactly/stably; nullopt if inconsistent or rank-deficient
/// with no solution.  For consistent underdetermined systems returns one
/// solution (free variables set to zero).
template <class S>
std::optional<std::vector<S>> solve(const Matrix<S>& m, const std::vector<S>& b) {
  assert(static_cast<int>(b.size()) == m.rows());
  Matrix<S> aug(m.rows(), m.cols() + 1);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  std::vector<int> pivots = rref(aug);
  if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;  // 0 = 1 row
  std::vector<S> x(m.cols(), S(0));
  for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(static_cast<int>(r), m.cols());
  if constexpr (!scalar_traits<S>::exact) {
    // Guard against near-singular float systems that slipped past pivoting.
    for (int i = 0; i < m.rows(); ++i) {
      S acc(0);
      for (int j = 0; j < m.cols(); ++j) acc += m(i, j) * x[j];
      if (scalar_traits<S>::abs(acc - b[i]) > S(1e-8)) return std::nullopt;
    }
  }
  return x;
}

template <class S>
int rank(Matrix<S> m) {
  return static_cast<int>(rref(m).size());
}

enum class Definiteness { positive, negative, indefinite_or_degenerate };

/// Sylvester test on leading principal minors (exact in rational mode).
template <class S>
Definiteness definiteness(const Matrix<S>& m) {
  assert(m.rows() == m.cols());
  const int n = m.rows();
  bool pos = true, neg = true;
  for (int k = 1; k <= n; ++k) {
    Matrix<S> lead(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) lead(i, j) = m(i, j);
    S d = determinant(lead);
    if (!(d > S(0))) pos = false;
    if (k % 2 == 1 ? !(d < S(0)) : !(d > S(0))) neg = false;
    if (!pos && !neg) return Definiteness::indefinite_or_degenerate;
  }
  return pos ? Definiteness::positive : Definiteness::negative;
}

}  // namespace g2lab

#endif
