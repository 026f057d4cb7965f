#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "vod/catalog.hpp"
#include "vod/error.hpp"
#include "vod/matrix.hpp"
#include "vod/polytope.hpp"

using namespace vod;

namespace {

RationalMatrix j_matrix(std::size_t n) { return RationalMatrix::ones(n, n); }

RationalMatrix mem3_a() {
  const auto m = build(Family::kMem, 3, 0);
  return build_h_representation(m.problem, m.maximal_design).a;
}

}  // namespace

TEST_CASE("rationals parse and print in lowest terms") {
  CHECK(parse_rational("-3/6") == Rational(-1, 2));
  CHECK(parse_rational("0.95") == Rational(19, 20));
  CHECK(parse_rational("1.5e-2") == Rational(3, 200));
  CHECK(parse_rational("7") == 7);
  CHECK(to_string(parse_rational("-6/4")) == "-3/2");
  CHECK(to_string(parse_rational("4/2")) == "2");
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("abc"), ParseError);
  CHECK(from_double(0.25) == Rational(1, 4));
}

TEST_CASE("primitive integer scaling") {
  const RationalVector v{Rational(1, 2), Rational(-3, 4), 0};
  CHECK(primitive_integer(v) == RationalVector{2, -3, 0});
}

TEST_CASE("rref examples") {
  auto r = rref(RationalMatrix::identity(3));
  CHECK(r.reduced == RationalMatrix::identity(3));
  CHECK(r.pivots == std::vector<std::size_t>{0, 1, 2});

  r = rref(RationalMatrix{{2, 4}});
  CHECK(r.reduced == RationalMatrix{{1, 2}});
  CHECK(r.pivots == std::vector<std::size_t>{0});

  const auto a = mem3_a();
  CHECK(a.rows() == 10);
  CHECK(a.cols() == 8);
  CHECK(rref(a).pivots.size() == 7);
}

TEST_CASE("determinant, inverse and powers on the SBW k=6 information matrix") {
  CHECK(determinant(RationalMatrix::identity(4)) == 1);

  const Rational a(2, 7);
  const RationalMatrix m = a * (RationalMatrix::identity(6) + j_matrix(6));
  const RationalMatrix expected = Rational(7, 2) * (RationalMatrix::identity(6) - Rational(1, 7) * j_matrix(6));
  CHECK(inverse(m) == expected);
  CHECK(oracle::multiply(m, expected) == RationalMatrix::identity(6));
  CHECK(matrix_power(m, -1) == expected);
  CHECK(matrix_power(m, 2) == oracle::multiply(m, m));
  CHECK(matrix_power(m, 0) == RationalMatrix::identity(6));
  // det(a (I + J)) = 7 a^6
  Rational a6 = 1;
  for (int i = 0; i < 6; ++i) a6 *= a;
  CHECK(determinant(m) == 7 * a6);
}

TEST_CASE("null space of the MEM k=3 moment matrix is the three-factor contrast") {
  const auto model = build(Family::kMem, 3, 0);
  const auto a = mem3_a();
  const auto n = nullspace_basis(a);
  REQUIRE(n.cols() == 1);
  RationalVector contrast;
  for (std::size_t i = 0; i < model.problem.d(); ++i) {
    const auto& y = model.problem.points[i];
    contrast.push_back(y[0] * y[1] * y[2]);
  }
  const auto col = n.col(0);
  const Rational scale = col[0] / contrast[0];
  for (std::size_t i = 0; i < col.size(); ++i) CHECK(col[i] == scale * contrast[i]);
  CHECK(a * col == RationalVector(a.rows()));
}

TEST_CASE("singular and mismatched inputs are rejected") {
  const RationalMatrix s{{1, 2}, {2, 4}};
  CHECK_THROWS_AS(inverse(s), SingularMatrix);
  CHECK_THROWS_AS(matrix_power(s, -1), SingularMatrix);
  CHECK_THROWS_AS(RationalMatrix(2, 3) * RationalMatrix(2, 3), DimensionMismatch);
  CHECK_THROWS_AS(determinant(RationalMatrix(2, 3)), DimensionMismatch);
}

TEST_CASE("solve statuses") {
  const RationalMatrix m{{1, 1}, {1, 1}};
  CHECK(solve(m, RationalVector{1, 2}).status == SolveStatus::kNoSolution);
  CHECK(solve(m, RationalVector{1, 1}).status == SolveStatus::kUnderdetermined);
  const auto r = solve(RationalMatrix{{2, 0}, {0, 4}}, RationalVector{1, 1});
  CHECK(r.status == SolveStatus::kUnique);
  CHECK(r.x == RationalVector{Rational(1, 2), Rational(1, 4)});
}

TEST_CASE("random matrices: rank-nullity, rref idempotence, rank oracle") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> dim(1, 6);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t rows = dim(rng), cols = dim(rng);
    auto m = oracle::random_matrix(rng, rows, cols);
    // Force some rank deficiency every other trial.
    if (trial % 2 == 0 && rows > 1) {
      for (std::size_t c = 0; c < cols; ++c) m(rows - 1, c) = m(0, c) * 3;
    }
    const auto r = rank(m);
    const auto n = nullspace_basis(m);
    CHECK(r == oracle::bareiss_rank(m));
    CHECK(r + n.cols() == cols);
    if (n.cols() > 0) {
      CHECK(oracle::multiply(m, n) == RationalMatrix(rows, n.cols()));
      CHECK(oracle::bareiss_rank(n) == n.cols());
    }
    const auto once = rref(m);
    const auto twice = rref(once.reduced);
    CHECK(twice.reduced == once.reduced);
    CHECK(twice.pivots == once.pivots);
  }
}

TEST_CASE("random nonsingular 4x4: inverse, determinant and solve") {
  std::mt19937_64 rng(7);
  int checked = 0;
  while (checked < 40) {
    const auto m = oracle::random_matrix(rng, 4, 4);
    const Rational det = oracle::laplace_det(m);
    CHECK(determinant(m) == det);
    if (det == 0) continue;
    ++checked;
    CHECK(oracle::multiply(m, inverse(m)) == RationalMatrix::identity(4));
    const auto x = oracle::random_matrix(rng, 4, 1).col(0);
    const auto r = solve(m, m * x);
    CHECK(r.status == SolveStatus::kUnique);
    CHECK(r.x == x);
  }
}

TEST_CASE("products against the triple-loop oracle") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = oracle::random_matrix(rng, 3, 5);
    const auto b = oracle::random_matrix(rng, 5, 2);
    CHECK(a * b == oracle::multiply(a, b));
    CHECK((a * b).transpose() == b.transpose() * a.transpose());
  }
}
