#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "vod/analysis.hpp"
#include "vod/catalog.hpp"
#include "vod/error.hpp"

using namespace vod;

namespace {

std::string data_file(const char* name) { return std::string(VOD_TEST_DATA_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

bool contains(const std::vector<Permutation>& gens, const Permutation& g) {
  return std::find(gens.begin(), gens.end(), g) != gens.end();
}

}  // namespace

TEST_CASE("catalog constructions") {
  auto m = build(Family::kMem, 3, 0);
  CHECK(m.problem.d() == 8);
  CHECK(m.problem.m == 4);
  for (const auto& w : m.maximal_design.weights) CHECK(w == Rational(1, 8));

  m = build(Family::kSbw, 6, -1);
  CHECK(m.problem.d() == 20);
  for (std::size_t i = 0; i < m.problem.d(); ++i) {
    CHECK(m.maximal_design.weights[i] == Rational(1, 20));
    CHECK(std::count(m.problem.points[i].begin(), m.problem.points[i].end(), Rational(1)) == 3);
  }

  m = build(Family::kSbw, 6, 0);
  CHECK(m.problem.d() == 35);

  m = build(Family::kInt, 5, 0);
  CHECK(m.problem.d() == 32);
  CHECK(m.problem.m == 16);

  m = build(Family::kQwoi, 3, 0);
  CHECK(m.problem.d() == 27);
  CHECK(m.problem.m == 7);

  CHECK_THROWS_AS(build(Family::kQwoi, 3, -1), InvalidArgument);
  CHECK_THROWS_AS(build(Family::kCustom, 3, 0), InvalidArgument);
  CHECK_THROWS_AS(parse_family("xyz"), InvalidArgument);
}

TEST_CASE("candidate points are in lexicographic order") {
  for (auto f : {Family::kSbw, Family::kCbw, Family::kMem, Family::kInt, Family::kQwoi}) {
    const auto m = build(f, 3, 0);
    for (std::size_t i = 1; i < m.problem.d(); ++i) {
      CHECK(lex_compare(m.problem.points[i - 1], m.problem.points[i]) < 0);
    }
  }
}

TEST_CASE("regressors follow the family formulas") {
  const RationalVector x{-1, 0, 1};
  CHECK(regressor(Family::kCbw, x) == x);
  CHECK(regressor(Family::kMem, x) == RationalVector{1, -1, 0, 1});
  CHECK(regressor(Family::kInt, x) == RationalVector{1, -1, 0, 1, 0, -1, 0});
  CHECK(regressor(Family::kQwoi, x) == RationalVector{1, -1, 0, 1, 1, 0, 1});
}

TEST_CASE("symmetry generators") {
  // Y = (-1,-1), (-1,1), (1,-1), (1,1).
  const auto cbw = build(Family::kCbw, 2, 0);
  CHECK(contains(cbw.symmetry_generators, Permutation{0, 2, 1, 3}));
  CHECK(contains(cbw.symmetry_generators, Permutation{3, 1, 2, 0}));
  CHECK(contains(cbw.symmetry_generators, Permutation{0, 2, 1, 3}));
  CHECK(format_cycles(Permutation{3, 2, 1, 0}) == "(1 4)(2 3)");

  const auto sbw = build(Family::kSbw, 6, 0);
  CHECK(sbw.symmetry_generators.size() == 5);

  const auto kinds = family_symmetries(Family::kMem);
  CHECK(kinds.relabel);
  CHECK(kinds.sign_flip);
  CHECK_FALSE(kinds.point_negation);
  CHECK(family_symmetries(Family::kCbw).point_negation);
}

TEST_CASE("generators fix the maximal design and preserve P_*") {
  for (const auto& [f, k, p] : std::vector<std::tuple<Family, std::size_t, int>>{
           {Family::kSbw, 6, 0}, {Family::kSbw, 6, -1}, {Family::kCbw, 3, 0}, {Family::kMem, 4, 0},
           {Family::kInt, 5, 0}, {Family::kQwoi, 3, 0}}) {
    const auto model = build(f, k, p);
    const auto cat = analyze(model);
    for (const auto& g : model.symmetry_generators) {
      CHECK(permute_weights(g, model.maximal_design.weights) == model.maximal_design.weights);
      for (const auto& v : cat.vertices.vertices) CHECK(membership(cat.polytope, permute_weights(g, v)));
    }
  }
}

TEST_CASE("cycle notation round-trips") {
  const auto g = parse_cycles("(1 3 2)(5 6)", 6);
  CHECK(g == Permutation{2, 0, 1, 3, 5, 4});
  CHECK(parse_cycles(format_cycles(g), 6) == g);
  CHECK_THROWS_AS(parse_cycles("(1 7)", 6), ParseError);
  CHECK_THROWS_AS(parse_cycles("(1 2)(2 3)", 6), ParseError);
}

TEST_CASE("problem files") {
  const auto ok = load_problem(data_file("quadratic_t0.problem"));
  REQUIRE(ok.verdict);
  CHECK(ok.verdict->passed);
  CHECK(ok.problem.d() == 3);
  CHECK(ok.problem.candidate_count() == 5);
  CHECK(ok.symmetry_generators == std::vector<Permutation>{{2, 1, 0}});

  CHECK_THROWS_AS(load_problem(data_file("perturbed.problem")), VerificationFailure);
  CHECK_THROWS_AS(load_problem(data_file("malformed.problem")), ParseError);
  CHECK_THROWS_AS(load_problem(data_file("missing.problem")), ParseError);

  const auto parsed = parse_problem(slurp(data_file("perturbed.problem")), "perturbed");
  REQUIRE(parsed.verdict);
  CHECK_FALSE(parsed.verdict->passed);
}

TEST_CASE("format_problem output parses back to the same model") {
  for (const auto& [f, k, p] : std::vector<std::tuple<Family, std::size_t, int>>{
           {Family::kCbw, 3, 0}, {Family::kSbw, 6, -1}, {Family::kQwoi, 2, 0}}) {
    const auto model = build(f, k, p);
    const auto back = parse_problem(format_problem(model), model.problem.name);
    CHECK(back.problem.points == model.problem.points);
    CHECK(back.problem.regressors == model.problem.regressors);
    CHECK(back.problem.support_size == model.problem.support_size);
    CHECK(back.problem.p == model.problem.p);
    CHECK(back.maximal_design == model.maximal_design);
    CHECK(back.symmetry_generators == model.symmetry_generators);
  }
}

TEST_CASE("shipped maximal designs pass verification") {
  for (auto f : {Family::kSbw, Family::kCbw, Family::kMem, Family::kInt, Family::kQwoi}) {
    for (std::size_t k = 2; k <= 4; ++k) {
      if (f == Family::kSbw && k < 3) continue;
      const auto model = build(f, k, 0);
      CHECK_MESSAGE(verify_maximal_optimal(model.problem, model.maximal_design).passed, model.problem.name);
    }
  }
}
