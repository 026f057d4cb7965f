#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "vod/catalog.hpp"
#include "vod/enumerate.hpp"
#include "vod/polytope.hpp"

namespace vod {

/// Bounds on the number of vertices implied by d, s and t.
struct BoundsRecord {
  Integer sperner_upper;   ///< C(d, floor(d/2))
  Integer subset_upper;    ///< C(d, s)
  Integer mcmullen_upper;  ///< C(d - floor((t+1)/2), s) + C(d - floor((t+2)/2), s)
  Integer lower_cover;     ///< ceil(d / s)
  Integer lower_dim;       ///< t + 1

  /// Lower bounds <= ell <= every upper bound.
  bool sandwiches(std::size_t ell) const;
  friend bool operator==(const BoundsRecord&, const BoundsRecord&) = default;
};

BoundsRecord compute_bounds(std::size_t d, std::size_t s, std::size_t t);

struct Orbit {
  std::size_t representative = 0;  ///< lexicographically smallest member
  std::vector<std::size_t> members;
  std::size_t size() const noexcept { return members.size(); }
  friend bool operator==(const Orbit&, const Orbit&) = default;
};

/// Orbits are ordered by representative; orbit_of[j] indexes into orbits.
struct OrbitPartition {
  std::vector<std::size_t> orbit_of;
  std::vector<Orbit> orbits;

  /// Orbit sizes in decreasing order.
  std::vector<std::size_t> sorted_sizes() const;
};

/// Closure of the vertex list under the generators, merged by union-find.
/// Throws SymmetryError when an image of a vertex is not a vertex.
OrbitPartition classify_orbits(const OptimalPolytope& polytope, const VertexList& vertices,
                               const std::vector<Permutation>& generators, unsigned threads = 0);

struct VertexInfo {
  std::vector<std::size_t> support;
  Integer size;  ///< smallest N with N v integral
  friend bool operator==(const VertexInfo&, const VertexInfo&) = default;
};

struct VodCatalog {
  std::string problem;
  OptimalPolytope polytope;
  VertexList vertices;
  std::vector<VertexInfo> info;
  OrbitPartition orbits;
  BoundsRecord bounds;

  std::size_t ell() const noexcept { return vertices.size(); }
};

/// Per-vertex metadata, bounds, and orbits under the given generators
/// (singletons when there are none).
VodCatalog make_catalog(std::string problem, OptimalPolytope polytope, VertexList vertices,
                        const std::vector<Permutation>& generators = {}, unsigned threads = 0);

/// Builds P_*, enumerates it and classifies the vertices under the model's symmetries.
VodCatalog analyze(const CatalogModel& model, const EnumOptions& options = {});

/// Vertices of the smallest support size.
std::vector<std::size_t> absolutely_minimal(const VodCatalog& catalog);

struct MinimalityResult {
  bool minimal = false;
  /// A vertex whose support is strictly inside the support of a non-minimal design.
  std::optional<std::size_t> witness;
};

/// A point of P_* is a minimal optimal design iff its support columns of A
/// are independent; then it is the only optimal design on that support.
MinimalityResult minimality_check(const VodCatalog& catalog, std::span<const Rational> w);

struct DecompositionTerm {
  std::size_t vertex = 0;
  Rational coefficient;
};

/// Writes w as a convex combination of at most t + 1 vertices. Throws
/// InvalidArgument when w is not in P_*.
std::vector<DecompositionTerm> caratheodory_decompose(const VodCatalog& catalog, std::span<const Rational> w);

RationalVector recombine(const VodCatalog& catalog, const std::vector<DecompositionTerm>& terms);

/// A design with the same information matrix supported on at most
/// rank([A; 1']) points.
Design reduce_support(const DesignProblem& problem, const Design& design);

struct Interval {
  Rational lo;
  Rational hi;
  friend bool operator==(const Interval&, const Interval&) = default;
};

std::vector<Interval> weight_ranges(const VodCatalog& catalog);

/// Average of all vertices.
Design barycentric_design(const VodCatalog& catalog);

struct MaximalSupportCertificate {
  bool supports_cover_y = false;
  bool strictly_positive = false;
  bool holds() const noexcept { return supports_cover_y && strictly_positive; }
};

MaximalSupportCertificate maximal_support_certificate(const VodCatalog& catalog, const Design& barycenter);

struct AchievableSizes {
  Integer gcd;
  std::size_t n_max = 0;
  std::vector<std::size_t> sizes;  ///< achievable N in [1, n_max], increasing
  /// For each entry of sizes: (vertex, multiplicity K_j) with sum K_j N_j = N.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> realizations;
  /// Smallest N from which every multiple of gcd up to n_max is achievable.
  std::optional<std::size_t> stable_from;
  friend bool operator==(const AchievableSizes&, const AchievableSizes&) = default;
};

AchievableSizes exact_design_sizes(const VodCatalog& catalog, std::size_t n_max);

/// Trial counts of an exact design of size N by multiplier apportionment.
/// Ties go to the lowest index. Throws InvalidArgument when N is below the
/// support size.
std::vector<std::size_t> efficient_round(std::span<const Rational> weights, std::size_t n);

struct LinearCostResult {
  Rational value;
  std::vector<std::size_t> minimizers;
};

LinearCostResult minimize_linear_cost(const VodCatalog& catalog, std::span<const Rational> cost);

/// Reading of a 0/1 support as the incidence matrix of a block design with
/// k treatments (rows) and one block per support point.
struct BlockDesignReport {
  std::size_t treatments = 0;
  std::size_t blocks = 0;
  bool uniform = false;
  std::vector<std::size_t> replications;              ///< r_i
  std::vector<std::vector<std::size_t>> concurrences;  ///< lambda_ij, i != j
  std::vector<std::size_t> block_sizes;
  std::optional<std::size_t> r;       ///< common replication
  std::optional<std::size_t> lambda;  ///< common concurrence
  std::optional<std::size_t> block_size;
  Rational r_over_b;
  Rational lambda_over_b;
  /// r/b and lambda/b equal the diagonal and off-diagonal entries of M_*.
  bool matches_information = false;

  bool is_pbd() const noexcept { return r.has_value() && lambda.has_value(); }
  bool is_bibd() const noexcept { return is_pbd() && block_size.has_value(); }
};

/// Throws InvalidArgument when a support point is not a 0/1 vector.
BlockDesignReport pbd_condition_check(const DesignProblem& problem, std::span<const Rational> vertex,
                                      const InformationMatrix& m_star);

struct ProjectedPoint {
  RationalVector coords;
  std::vector<std::size_t> vertices;
  std::size_t multiplicity() const noexcept { return vertices.size(); }
};

/// normal . x <= offset, tight on the listed points.
struct HullFacet {
  RationalVector normal;
  Rational offset;
  std::vector<std::size_t> points;
};

struct Projection {
  std::vector<std::size_t> axes;
  std::vector<ProjectedPoint> points;  ///< distinct projections, lexicographic
  std::size_t dimension = 0;           ///< affine dimension of the projection
  std::vector<std::size_t> extreme_points;
  std::vector<HullFacet> facets;
};

/// Projection of the vertices onto 1 to 3 coordinates of Y.
Projection project(const VodCatalog& catalog, const std::vector<std::size_t>& axes);

}  // namespace vod
