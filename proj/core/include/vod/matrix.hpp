#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include "vod/rational.hpp"

namespace vod {

/// Dense row-major matrix of exact rationals.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  RationalMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> data);
  RationalMatrix(std::initializer_list<std::initializer_list<Rational>> rows);

  static RationalMatrix identity(std::size_t n);
  static RationalMatrix ones(std::size_t rows, std::size_t cols);
  static RationalMatrix column(std::span<const Rational> v);
  static RationalMatrix outer(std::span<const Rational> a, std::span<const Rational> b);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Rational> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Rational> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  RationalVector col(std::size_t c) const;

  const std::vector<Rational>& data() const noexcept { return data_; }

  RationalMatrix transpose() const;
  RationalMatrix select_columns(std::span<const std::size_t> cols) const;
  RationalMatrix select_rows(std::span<const std::size_t> rows) const;
  bool is_symmetric() const;
  Rational trace() const;

  RationalMatrix& operator+=(const RationalMatrix& rhs);
  RationalMatrix& operator-=(const RationalMatrix& rhs);
  RationalMatrix& operator*=(const Rational& s);

  friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

RationalMatrix operator+(RationalMatrix lhs, const RationalMatrix& rhs);
RationalMatrix operator-(RationalMatrix lhs, const RationalMatrix& rhs);
RationalMatrix operator*(const RationalMatrix& lhs, const RationalMatrix& rhs);
RationalMatrix operator*(RationalMatrix m, const Rational& s);
RationalMatrix operator*(const Rational& s, RationalMatrix m);
RationalVector operator*(const RationalMatrix& m, std::span<const Rational> v);

struct RrefResult {
  RationalMatrix reduced;
  std::vector<std::size_t> pivots;
};

/// Reduced row echelon form. Pivot search takes the first nonzero entry
/// of each column at or below the current row.
RrefResult rref(RationalMatrix m);

std::size_t rank(const RationalMatrix& m);

/// Columns span N(m). Each column has a 1 in one free position and zeros in
/// the other free positions, then is scaled to a primitive integer vector.
/// Not orthonormalized.
RationalMatrix nullspace_basis(const RationalMatrix& m);

enum class SolveStatus { kUnique, kNoSolution, kUnderdetermined };

struct SolveResult {
  SolveStatus status;
  RationalVector x;  ///< the solution when unique, else a particular solution or empty
};

SolveResult solve(const RationalMatrix& m, std::span<const Rational> rhs);

RationalMatrix inverse(const RationalMatrix& m);
Rational determinant(const RationalMatrix& m);

/// m^e; a negative exponent goes through the inverse.
RationalMatrix matrix_power(const RationalMatrix& m, long e);

Rational dot(std::span<const Rational> a, std::span<const Rational> b);

/// Quadratic form a' M a.
Rational quadratic_form(const RationalMatrix& m, std::span<const Rational> a);

/// Scales v by a positive rational so it becomes a primitive integer vector.
RationalVector primitive_integer(std::span<const Rational> v);

}  // namespace vod
