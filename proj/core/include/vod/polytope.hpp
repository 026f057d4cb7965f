#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "vod/design.hpp"
#include "vod/matrix.hpp"

namespace vod {

/// Half-vectorization: the lower triangle of a symmetric matrix, column by
/// column. Throws InvalidArgument for non-symmetric input.
RationalVector vech(const RationalMatrix& s);

/// The polytope of optimal weights P_* = {w >= 0 : A w = b}.
struct OptimalPolytope {
  RationalMatrix a;        ///< q x d, column i is vech(f_i f_i')
  RationalVector b;        ///< vech(M_*)
  std::size_t m = 0;
  std::size_t d = 0;
  std::size_t q = 0;
  std::size_t s = 0;       ///< rank(A)
  std::size_t t = 0;       ///< dim P_* = d - s
  RationalMatrix u;        ///< d x t basis of N(A), rational, not orthonormal
  RationalVector w_tilde;  ///< strictly positive interior point (the maximal design)
  InformationMatrix m_star;
};

/// Verifies the maximal design (VerificationFailure otherwise) and builds
/// A, b, the rank and a null-space basis.
OptimalPolytope build_h_representation(const DesignProblem& problem, const Design& maximal_design);

/// Full-dimensional form {tau in R^t : U tau >= -w_tilde}; w = U tau + w_tilde.
struct ReducedSystem {
  RationalMatrix u;
  RationalVector w_tilde;

  std::size_t dimension() const noexcept { return u.cols(); }
  std::size_t inequality_count() const noexcept { return u.rows(); }
  RationalVector lift(std::span<const Rational> tau) const;
  /// Inverse of lift on the affine hull; throws InvalidArgument off the hull.
  RationalVector coordinates(std::span<const Rational> w) const;
};

/// std::nullopt signals the trivial polytope (t = 0, unique optimal design).
std::optional<ReducedSystem> reduce(const OptimalPolytope& polytope);

/// Exact test of w >= 0 and A w = b.
bool membership(const OptimalPolytope& polytope, std::span<const Rational> w);

/// True when the columns of A indexed by the support of w are linearly
/// independent.
bool independent_support(const OptimalPolytope& polytope, std::span<const Rational> w);

/// Vertices of P_* in lexicographic order.
struct VertexList {
  std::vector<RationalVector> vertices;

  std::size_t size() const noexcept { return vertices.size(); }
  /// Index of v in the sorted list, if present.
  std::optional<std::size_t> find(std::span<const Rational> v) const;
  friend bool operator==(const VertexList&, const VertexList&) = default;
};

/// Sorts lexicographically and removes duplicates.
void canonicalize(VertexList& list);

}  // namespace vod
