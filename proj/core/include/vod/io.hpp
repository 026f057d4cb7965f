#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "vod/analysis.hpp"
#include "vod/secondary.hpp"

namespace vod {

/// One vertex per row, rationals as "num/den", after a header w1,...,wd.
void write_vertices_csv(std::ostream& out, const VertexList& vertices);
VertexList read_vertices_csv(std::istream& in);

struct PolytopeShape {
  std::size_t d = 0, m = 0, q = 0, s = 0, t = 0;
  friend bool operator==(const PolytopeShape&, const PolytopeShape&) = default;
};

PolytopeShape shape_of(const OptimalPolytope& polytope);

/// {"d","m","q","s","t","ell","vertices"}.
void write_vertices_json(std::ostream& out, const OptimalPolytope& polytope, const VertexList& vertices);

struct VertexFile {
  PolytopeShape shape;
  VertexList vertices;
};
VertexFile read_vertices_json(std::istream& in);

/// Everything a report file carries, in exact form.
struct Report {
  std::string problem;
  PolytopeShape shape;
  BoundsRecord bounds;
  VertexList vertices;
  std::vector<VertexInfo> info;
  std::vector<std::size_t> orbit_of;
  std::vector<Orbit> orbits;
  std::vector<Interval> weight_ranges;
  AchievableSizes achievable;
  friend bool operator==(const Report&, const Report&) = default;
};

Report make_report(const VodCatalog& catalog, std::size_t n_max);
void write_report_json(std::ostream& out, const Report& report);
Report read_report_json(std::istream& in);

/// {"problem","ell","orbits":[{"representative","size","members"}]}; indices are 1-based.
void write_orbits_json(std::ostream& out, const VodCatalog& catalog);

/// Exact coordinates of each distinct projected point plus a multiplicity column.
void write_projection_csv(std::ostream& out, const Projection& projection);
/// Points, multiplicities, and the hull description.
void write_projection_json(std::ostream& out, const Projection& projection);

void write_verdict_json(std::ostream& out, const DesignProblem& problem, const Verdict& verdict,
                        std::size_t s, std::size_t t);

void write_secondary_json(std::ostream& out, const std::string& objective, const SecondaryResult& result);

void write_sizes_json(std::ostream& out, const AchievableSizes& sizes);

/// Whitespace- or comma-separated rationals; '#' starts a comment.
RationalVector read_rational_vector(std::istream& in);

}  // namespace vod
