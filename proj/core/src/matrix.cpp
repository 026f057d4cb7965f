#include "vod/matrix.hpp"

#include <string>
#include <utility>

#include "vod/error.hpp"

namespace vod {

namespace {

std::string shape(const RationalMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

RationalMatrix::RationalMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw DimensionMismatch("entry count " + std::to_string(data_.size()) + " for " + std::to_string(rows) +
                            "x" + std::to_string(cols));
  }
}

RationalMatrix::RationalMatrix(std::initializer_list<std::initializer_list<Rational>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionMismatch("ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::ones(std::size_t rows, std::size_t cols) {
  return RationalMatrix(rows, cols, std::vector<Rational>(rows * cols, Rational(1)));
}

RationalMatrix RationalMatrix::column(std::span<const Rational> v) {
  return RationalMatrix(v.size(), 1, std::vector<Rational>(v.begin(), v.end()));
}

RationalMatrix RationalMatrix::outer(std::span<const Rational> a, std::span<const Rational> b) {
  RationalMatrix m(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = a[i] * b[j];
  }
  return m;
}

RationalVector RationalMatrix::col(std::size_t c) const {
  RationalVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

RationalMatrix RationalMatrix::select_columns(std::span<const std::size_t> cols) const {
  RationalMatrix out(rows_, cols.size());
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t j = 0; j < cols.size(); ++j) out(r, j) = (*this)(r, cols[j]);
  }
  return out;
}

RationalMatrix RationalMatrix::select_rows(std::span<const std::size_t> rows) const {
  RationalMatrix out(rows.size(), cols_);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t c = 0; c < cols_; ++c) out(i, c) = (*this)(rows[i], c);
  }
  return out;
}

bool RationalMatrix::is_symmetric() const {
  if (!square()) return false;
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = r + 1; c < cols_; ++c) {
      if ((*this)(r, c) != (*this)(c, r)) return false;
    }
  }
  return true;
}

Rational RationalMatrix::trace() const {
  if (!square()) throw DimensionMismatch("trace of " + shape(*this));
  Rational t = 0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

RationalMatrix& RationalMatrix::operator+=(const RationalMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw DimensionMismatch(shape(*this) + " + " + shape(rhs));
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
  return *this;
}

RationalMatrix& RationalMatrix::operator-=(const RationalMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw DimensionMismatch(shape(*this) + " - " + shape(rhs));
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
  return *this;
}

RationalMatrix& RationalMatrix::operator*=(const Rational& s) {
  for (auto& x : data_) x *= s;
  return *this;
}

RationalMatrix operator+(RationalMatrix lhs, const RationalMatrix& rhs) { return lhs += rhs; }
RationalMatrix operator-(RationalMatrix lhs, const RationalMatrix& rhs) { return lhs -= rhs; }
RationalMatrix operator*(RationalMatrix m, const Rational& s) { return m *= s; }
RationalMatrix operator*(const Rational& s, RationalMatrix m) { return m *= s; }

RationalMatrix operator*(const RationalMatrix& lhs, const RationalMatrix& rhs) {
  if (lhs.cols() != rhs.rows()) throw DimensionMismatch(shape(lhs) + " * " + shape(rhs));
  RationalMatrix out(lhs.rows(), rhs.cols());
  Rational tmp;
  for (std::size_t i = 0; i < lhs.rows(); ++i) {
    for (std::size_t k = 0; k < lhs.cols(); ++k) {
      const Rational& a = lhs(i, k);
      if (sgn(a) == 0) continue;
      for (std::size_t j = 0; j < rhs.cols(); ++j) {
        if (sgn(rhs(k, j)) == 0) continue;
        tmp = a * rhs(k, j);
        out(i, j) += tmp;
      }
    }
  }
  return out;
}

RationalVector operator*(const RationalMatrix& m, std::span<const Rational> v) {
  if (m.cols() != v.size()) {
    throw DimensionMismatch(shape(m) + " * vector of length " + std::to_string(v.size()));
  }
  RationalVector out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) out[i] = dot(m.row(i), v);
  return out;
}

Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
  if (a.size() != b.size()) throw DimensionMismatch("dot of lengths " + std::to_string(a.size()) + ", " +
                                                    std::to_string(b.size()));
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
  }
  return s;
}

Rational quadratic_form(const RationalMatrix& m, std::span<const Rational> a) {
  return dot(a, m * a);
}

RrefResult rref(RationalMatrix m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  Rational factor;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t pivot = row;
    while (pivot < m.rows() && sgn(m(pivot, col)) == 0) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != row) {
      for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(pivot, c), m(row, c));
    }
    if (m(row, col) != 1) {
      const Rational inv = 1 / m(row, col);
      for (std::size_t c = col; c < m.cols(); ++c) m(row, c) *= inv;
    }
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == row || sgn(m(r, col)) == 0) continue;
      factor = m(r, col);
      for (std::size_t c = col; c < m.cols(); ++c) {
        if (sgn(m(row, c)) != 0) m(r, c) -= factor * m(row, c);
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return {std::move(m), std::move(pivots)};
}

std::size_t rank(const RationalMatrix& m) {
  // Plain forward elimination is enough for the rank.
  RationalMatrix a = m;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t pivot = row;
    while (pivot < a.rows() && sgn(a(pivot, col)) == 0) ++pivot;
    if (pivot == a.rows()) continue;
    if (pivot != row) {
      for (std::size_t c = col; c < a.cols(); ++c) std::swap(a(pivot, c), a(row, c));
    }
    for (std::size_t r = row + 1; r < a.rows(); ++r) {
      if (sgn(a(r, col)) == 0) continue;
      const Rational factor = a(r, col) / a(row, col);
      for (std::size_t c = col; c < a.cols(); ++c) {
        if (sgn(a(row, c)) != 0) a(r, c) -= factor * a(row, c);
      }
    }
    ++row;
  }
  return row;
}

RationalVector primitive_integer(std::span<const Rational> v) {
  Integer l = denominator_lcm(v);
  Integer g = 0;
  for (const auto& x : v) {
    Integer n = x.get_num() * (l / x.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
  }
  RationalVector out(v.begin(), v.end());
  if (g == 0) return out;
  const Rational scale(l, g);
  for (auto& x : out) x *= scale;
  return out;
}

RationalMatrix nullspace_basis(const RationalMatrix& m) {
  const auto [r, pivots] = rref(m);
  const std::size_t n = m.cols();
  std::vector<bool> is_pivot(n, false);
  for (auto p : pivots) is_pivot[p] = true;

  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < n; ++c) {
    if (!is_pivot[c]) free_cols.push_back(c);
  }
  RationalMatrix basis(n, free_cols.size());
  for (std::size_t j = 0; j < free_cols.size(); ++j) {
    RationalVector v(n);
    v[free_cols[j]] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -r(i, free_cols[j]);
    v = primitive_integer(v);
    for (std::size_t i = 0; i < n; ++i) basis(i, j) = v[i];
  }
  return basis;
}

SolveResult solve(const RationalMatrix& m, std::span<const Rational> rhs) {
  if (m.rows() != rhs.size()) {
    throw DimensionMismatch("solve with " + shape(m) + " and rhs of length " + std::to_string(rhs.size()));
  }
  RationalMatrix aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = rhs[i];
  }
  const auto [r, pivots] = rref(std::move(aug));
  if (!pivots.empty() && pivots.back() == m.cols()) return {SolveStatus::kNoSolution, {}};

  RationalVector x(m.cols());
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = r(i, m.cols());
  if (pivots.size() < m.cols()) return {SolveStatus::kUnderdetermined, std::move(x)};
  return {SolveStatus::kUnique, std::move(x)};
}

RationalMatrix inverse(const RationalMatrix& m) {
  if (!m.square()) throw DimensionMismatch("inverse of " + shape(m));
  const std::size_t n = m.rows();
  RationalMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  const auto [r, pivots] = rref(std::move(aug));
  if (pivots.size() < n || pivots[n - 1] != n - 1) throw SingularMatrix("inverse of " + shape(m));
  RationalMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = r(i, n + j);
  }
  return inv;
}

Rational determinant(const RationalMatrix& m) {
  if (!m.square()) throw DimensionMismatch("determinant of " + shape(m));
  RationalMatrix a = m;
  const std::size_t n = a.rows();
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && sgn(a(pivot, col)) == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != col) {
      for (std::size_t c = col; c < n; ++c) std::swap(a(pivot, c), a(col, c));
      det = -det;
    }
    det *= a(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (sgn(a(r, col)) == 0) continue;
      const Rational factor = a(r, col) / a(col, col);
      for (std::size_t c = col; c < n; ++c) a(r, c) -= factor * a(col, c);
    }
  }
  return det;
}

RationalMatrix matrix_power(const RationalMatrix& m, long e) {
  if (!m.square()) throw DimensionMismatch("power of " + shape(m));
  RationalMatrix base = e < 0 ? inverse(m) : m;
  unsigned long k = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
  RationalMatrix result = RationalMatrix::identity(m.rows());
  while (k > 0) {
    if (k & 1UL) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

}  // namespace vod
