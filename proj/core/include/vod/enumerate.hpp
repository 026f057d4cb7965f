#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "vod/polytope.hpp"

namespace vod {

struct EnumStats {
  std::size_t max_rays = 0;        ///< largest intermediate ray set
  std::size_t pair_candidates = 0; ///< ray pairs passing the tight-set size filter
  std::size_t adjacent_pairs = 0;
};

struct EnumOptions {
  /// Cap on the intermediate ray count; exceeding it throws ResourceLimit.
  std::size_t ray_cap = 20'000'000;
  /// 0 selects std::thread::hardware_concurrency().
  unsigned threads = 0;
  /// Explicit insertion order of the d inequalities (a permutation of 0..d-1).
  /// Defaults to increasing number of zero coefficients, then lexicographic.
  std::optional<std::vector<std::size_t>> insertion_order;
  EnumStats* stats = nullptr;
};

/// All vertices of P_* by the double description method on the reduced
/// t-dimensional system, mapped back to weights. Exact; the result is
/// sorted lexicographically and does not depend on threads or insertion order.
VertexList enumerate_vertices(const OptimalPolytope& polytope, const EnumOptions& options = {});

/// The default insertion order used by enumerate_vertices.
std::vector<std::size_t> default_insertion_order(const OptimalPolytope& polytope);

struct OracleOptions {
  /// Refuses to run when C(d, s) exceeds this (throws ResourceLimit).
  std::size_t subset_cap = 1'000'000;
  unsigned threads = 1;
};

/// Brute force over basic feasible solutions: every s-subset of columns of A
/// that is linearly independent yields at most one vertex.
VertexList oracle_enumerate(const OptimalPolytope& polytope, const OracleOptions& options = {});

unsigned resolve_threads(unsigned requested);

}  // namespace vod
