#pragma once

#include "tanaka/rational.hpp"

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

namespace tanaka {

/// Dense row-major matrix of exact rationals.
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static Matrix from_rows(const std::vector<Vec>& rows, std::size_t cols) {
    Matrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != cols) throw std::invalid_argument("row length mismatch");
      for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rat& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  const Rat& operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  Vec row(std::size_t r) const { return Vec(a_.begin() + r * cols_, a_.begin() + (r + 1) * cols_); }

  void set_row(std::size_t r, const Vec& v) {
    if (v.size() != cols_) throw std::invalid_argument("row length mismatch");
    std::copy(v.begin(), v.end(), a_.begin() + r * cols_);
  }

  void add_scaled_row(std::size_t r, const Rat& c, const Vec& v) {
    if (v.size() != cols_) throw std::invalid_argument("row length mismatch");
    if (c == 0) return;
    for (std::size_t j = 0; j < cols_; ++j) a_[r * cols_ + j] += c * v[j];
  }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  bool is_zero() const {
    for (const Rat& x : a_)
      if (x != 0) return false;
    return true;
  }

  /// Row-major flattening.
  Vec flatten() const { return a_; }

  static Matrix from_flat(std::size_t rows, std::size_t cols, const Vec& v) {
    if (v.size() != rows * cols) throw std::invalid_argument("flat size mismatch");
    Matrix m(rows, cols);
    m.a_ = v;
    return m;
  }

  friend Matrix vstack(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.cols_ && a.rows_ != 0 && b.rows_ != 0)
      throw std::invalid_argument("vstack column mismatch");
    std::size_t cols = a.rows_ ? a.cols_ : b.cols_;
    Matrix m(a.rows_ + b.rows_, cols);
    std::copy(a.a_.begin(), a.a_.end(), m.a_.begin());
    std::copy(b.a_.begin(), b.a_.end(), m.a_.begin() + a.a_.size());
    return m;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matmul shape mismatch");
    Matrix m(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Rat& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) m(i, j) += aik * b(k, j);
      }
    return m;
  }

  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("shape mismatch");
    Matrix m(a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.a_.size(); ++i) m.a_[i] = a.a_[i] - b.a_[i];
    return m;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("shape mismatch");
    Matrix m(a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.a_.size(); ++i) m.a_[i] = a.a_[i] + b.a_[i];
    return m;
  }

  /// v * M with v interpreted as a row vector.
  friend Vec operator*(const Vec& v, const Matrix& m) {
    if (v.size() != m.rows_) throw std::invalid_argument("vec*mat shape mismatch");
    Vec out(m.cols_);
    for (std::size_t r = 0; r < m.rows_; ++r) {
      if (v[r] == 0) continue;
      for (std::size_t c = 0; c < m.cols_; ++c) out[c] += v[r] * m(r, c);
    }
    return out;
  }

  bool operator==(const Matrix&) const = default;

private:
  std::size_t rows_ = 0, cols_ = 0;
  Vec a_;
};

struct RrefResult {
  Matrix r;                        // unique reduced row-echelon form, same shape as input
  std::vector<std::size_t> pivot_cols;
  std::size_t rank = 0;
};

namespace detail {

inline Int checked_div(const Int& a, const Int& b) {
  Int q, r;
  boost::multiprecision::divide_qr(a, b, q, r);
  if (r != 0) throw std::logic_error("fraction-free elimination: inexact division");
  return q;
}

}  // namespace detail

/// Reduced row-echelon form: fraction-free (Bareiss) forward elimination on
/// denominator-cleared integer rows, then exact back-substitution.
inline RrefResult rref(const Matrix& m) {
  const std::size_t R = m.rows(), C = m.cols();
  std::vector<std::vector<Int>> w(R, std::vector<Int>(C));
  for (std::size_t r = 0; r < R; ++r) {
    Int l = 1;
    for (std::size_t c = 0; c < C; ++c) l = lcm(l, denominator(m(r, c)));
    for (std::size_t c = 0; c < C; ++c)
      w[r][c] = numerator(m(r, c)) * (l / denominator(m(r, c)));
  }

  std::vector<std::size_t> pivots;
  Int prev = 1;
  std::size_t row = 0;
  for (std::size_t col = 0; col < C && row < R; ++col) {
    std::size_t p = row;
    while (p < R && w[p][col] == 0) ++p;
    if (p == R) continue;
    std::swap(w[p], w[row]);
    for (std::size_t i = row + 1; i < R; ++i) {
      for (std::size_t j = col + 1; j < C; ++j)
        w[i][j] = detail::checked_div(w[row][col] * w[i][j] - w[i][col] * w[row][j], prev);
      w[i][col] = 0;
    }
    prev = w[row][col];
    pivots.push_back(col);
    ++row;
  }

  RrefResult out;
  out.pivot_cols = pivots;
  out.rank = pivots.size();
  out.r = Matrix(R, C);
  for (std::size_t k = 0; k < out.rank; ++k) {
    const Int& pv = w[k][pivots[k]];
    for (std::size_t c = pivots[k]; c < C; ++c) out.r(k, c) = make_rat(w[k][c], pv);
  }
  for (std::size_t k = out.rank; k-- > 0;) {
    for (std::size_t i = 0; i < k; ++i) {
      Rat f = out.r(i, pivots[k]);
      if (f == 0) continue;
      for (std::size_t c = pivots[k]; c < C; ++c) out.r(i, c) -= f * out.r(k, c);
    }
  }
  return out;
}

/// Canonical basis of the null space {x : m x = 0}, one row per basis vector.
inline Matrix kernel_basis_matrix(const Matrix& m) {
  RrefResult rr = rref(m);
  const std::size_t C = m.cols();
  std::vector<bool> is_pivot(C, false);
  for (std::size_t p : rr.pivot_cols) is_pivot[p] = true;
  std::vector<Vec> rows;
  for (std::size_t f = 0; f < C; ++f) {
    if (is_pivot[f]) continue;
    Vec v(C);
    v[f] = 1;
    for (std::size_t k = 0; k < rr.rank; ++k) v[rr.pivot_cols[k]] = -rr.r(k, f);
    rows.push_back(std::move(v));
  }
  // re-reduce so that equal kernels have identical representations
  Matrix raw = Matrix::from_rows(rows, C);
  RrefResult canon = rref(raw);
  Matrix out(canon.rank, C);
  for (std::size_t r = 0; r < canon.rank; ++r)
    for (std::size_t c = 0; c < C; ++c) out(r, c) = canon.r(r, c);
  return out;
}

/// A linear subspace held by its canonical reduced-echelon basis, so equal
/// subspaces compare equal structurally.
class Subspace {
public:
  Subspace() = default;

  static Subspace zero(std::size_t ambient) {
    Subspace s;
    s.ambient_ = ambient;
    s.basis_ = Matrix(0, ambient);
    return s;
  }

  static Subspace full(std::size_t ambient) { return span_of(Matrix::identity(ambient)); }

  static Subspace span_of(const Matrix& rows) {
    Subspace s;
    s.ambient_ = rows.cols();
    RrefResult rr = rref(rows);
    s.basis_ = Matrix(rr.rank, rows.cols());
    for (std::size_t r = 0; r < rr.rank; ++r)
      for (std::size_t c = 0; c < rows.cols(); ++c) s.basis_(r, c) = rr.r(r, c);
    s.pivots_ = rr.pivot_cols;
    return s;
  }

  static Subspace span_of_rows(const std::vector<Vec>& rows, std::size_t ambient) {
    return span_of(Matrix::from_rows(rows, ambient));
  }

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t dim() const { return basis_.rows(); }
  const Matrix& basis() const { return basis_; }
  const std::vector<std::size_t>& pivot_cols() const { return pivots_; }

  /// Coordinates of v in the canonical basis, or nullopt when v is outside.
  std::optional<Vec> coordinates(const Vec& v) const {
    if (v.size() != ambient_) throw std::invalid_argument("ambient dimension mismatch");
    Vec coords(dim());
    for (std::size_t k = 0; k < dim(); ++k) coords[k] = v[pivots_[k]];
    Vec rebuilt(ambient_);
    for (std::size_t k = 0; k < dim(); ++k)
      if (coords[k] != 0)
        for (std::size_t c = 0; c < ambient_; ++c) rebuilt[c] += coords[k] * basis_(k, c);
    for (std::size_t c = 0; c < ambient_; ++c)
      if (rebuilt[c] != v[c]) return std::nullopt;
    return coords;
  }

  bool contains(const Vec& v) const { return coordinates(v).has_value(); }

  bool contains(const Subspace& other) const {
    if (other.ambient_ != ambient_) throw std::invalid_argument("ambient dimension mismatch");
    for (std::size_t r = 0; r < other.dim(); ++r)
      if (!contains(other.basis_.row(r))) return false;
    return true;
  }

  /// Linear combination of basis rows given coordinates.
  Vec combine(const Vec& coords) const {
    if (coords.size() != dim()) throw std::invalid_argument("coordinate length mismatch");
    Vec out(ambient_);
    for (std::size_t k = 0; k < dim(); ++k)
      if (coords[k] != 0)
        for (std::size_t c = 0; c < ambient_; ++c) out[c] += coords[k] * basis_(k, c);
    return out;
  }

  bool operator==(const Subspace&) const = default;

private:
  std::size_t ambient_ = 0;
  Matrix basis_;
  std::vector<std::size_t> pivots_;
};

inline Subspace kernel_basis(const Matrix& m) {
  return Subspace::span_of(kernel_basis_matrix(m));
}

/// a ∩ b via the annihilator method: a vector lies in both spaces iff it is
/// killed by the stacked annihilators.
inline Subspace intersect(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim())
    throw std::invalid_argument("ambient dimension mismatch");
  Matrix ann_a = kernel_basis_matrix(a.basis());
  Matrix ann_b = kernel_basis_matrix(b.basis());
  return kernel_basis(vstack(ann_a, ann_b));
}

inline Subspace sum(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim())
    throw std::invalid_argument("ambient dimension mismatch");
  return Subspace::span_of(vstack(a.basis(), b.basis()));
}

inline std::optional<Vec> membership(const Vec& v, const Subspace& s) {
  return s.coordinates(v);
}

}  // namespace tanaka
