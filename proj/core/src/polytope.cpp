#include "vod/polytope.hpp"

#include <algorithm>

#include "vod/error.hpp"

namespace vod {

RationalVector vech(const RationalMatrix& s) {
  if (!s.is_symmetric()) throw InvalidArgument("vech of a non-symmetric matrix");
  const std::size_t n = s.rows();
  RationalVector out;
  out.reserve(n * (n + 1) / 2);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t r = c; r < n; ++r) out.push_back(s(r, c));
  }
  return out;
}

OptimalPolytope build_h_representation(const DesignProblem& problem, const Design& maximal_design) {
  problem.validate();
  if (maximal_design.weights.size() != problem.d()) {
    throw DimensionMismatch("maximal design length differs from the support size");
  }
  for (const auto& w : maximal_design.weights) {
    if (sgn(w) <= 0) throw VerificationFailure("maximal design must be positive on the whole support");
  }
  Verdict verdict;
  try {
    verdict = verify_maximal_optimal(problem, maximal_design);
  } catch (const SingularMatrix&) {
    throw VerificationFailure("information matrix of the maximal design is singular");
  }
  if (!verdict.passed) {
    throw VerificationFailure("maximal design violates the equivalence conditions at " +
                              std::to_string(verdict.violations.size()) + " candidate(s)");
  }

  OptimalPolytope poly;
  poly.m = problem.m;
  poly.d = problem.d();
  poly.q = poly.m * (poly.m + 1) / 2;
  poly.a = RationalMatrix(poly.q, poly.d);
  for (std::size_t i = 0; i < poly.d; ++i) {
    const auto& f = problem.regressors[i];
    std::size_t row = 0;
    for (std::size_t c = 0; c < poly.m; ++c) {
      for (std::size_t r = c; r < poly.m; ++r) poly.a(row++, i) = f[r] * f[c];
    }
  }
  poly.m_star = information_matrix(problem, maximal_design);
  poly.b = vech(poly.m_star);
  poly.u = nullspace_basis(poly.a);
  poly.t = poly.u.cols();
  poly.s = poly.d - poly.t;
  poly.w_tilde = maximal_design.weights;
  return poly;
}

RationalVector ReducedSystem::lift(std::span<const Rational> tau) const {
  RationalVector w = u * tau;
  for (std::size_t i = 0; i < w.size(); ++i) w[i] += w_tilde[i];
  return w;
}

RationalVector ReducedSystem::coordinates(std::span<const Rational> w) const {
  RationalVector diff(w.begin(), w.end());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= w_tilde[i];
  const auto res = solve(u, diff);
  if (res.status != SolveStatus::kUnique) throw InvalidArgument("point is not on the affine hull of P_*");
  return res.x;
}

std::optional<ReducedSystem> reduce(const OptimalPolytope& polytope) {
  if (polytope.t == 0) return std::nullopt;
  return ReducedSystem{polytope.u, polytope.w_tilde};
}

bool membership(const OptimalPolytope& polytope, std::span<const Rational> w) {
  if (w.size() != polytope.d) return false;
  for (const auto& x : w) {
    if (sgn(x) < 0) return false;
  }
  return polytope.a * w == polytope.b;
}

bool independent_support(const OptimalPolytope& polytope, std::span<const Rational> w) {
  std::vector<std::size_t> supp;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (sgn(w[i]) != 0) supp.push_back(i);
  }
  return rank(polytope.a.select_columns(supp)) == supp.size();
}

std::optional<std::size_t> VertexList::find(std::span<const Rational> v) const {
  const auto it = std::lower_bound(vertices.begin(), vertices.end(), v,
                                   [](const RationalVector& a, std::span<const Rational> b) {
                                     return lex_compare(a, b) < 0;
                                   });
  if (it == vertices.end() || lex_compare(*it, v) != 0) return std::nullopt;
  return static_cast<std::size_t>(it - vertices.begin());
}

void canonicalize(VertexList& list) {
  std::sort(list.vertices.begin(), list.vertices.end(), LexLess{});
  list.vertices.erase(std::unique(list.vertices.begin(), list.vertices.end()), list.vertices.end());
}

}  // namespace vod
