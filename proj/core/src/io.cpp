#include "vod/io.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "text_util.hpp"
#include "vod/error.hpp"

namespace vod {

using nlohmann::json;

namespace {

json rationals(std::span<const Rational> v) {
  json arr = json::array();
  for (const auto& x : v) arr.push_back(to_string(x));
  return arr;
}

RationalVector rationals_from(const json& arr) {
  RationalVector v;
  for (const auto& x : arr) v.push_back(parse_rational(x.get<std::string>()));
  return v;
}

json one_based(const std::vector<std::size_t>& idx) {
  json arr = json::array();
  for (auto i : idx) arr.push_back(i + 1);
  return arr;
}

std::vector<std::size_t> zero_based(const json& arr) {
  std::vector<std::size_t> v;
  for (const auto& x : arr) {
    const auto i = x.get<std::size_t>();
    if (i == 0) throw ParseError("indices are 1-based");
    v.push_back(i - 1);
  }
  return v;
}

Integer integer_from(const json& x) { return Integer(x.get<std::string>()); }

json shape_json(const PolytopeShape& s) {
  return json{{"d", s.d}, {"m", s.m}, {"q", s.q}, {"s", s.s}, {"t", s.t}};
}

PolytopeShape shape_from(const json& j) {
  return {j.at("d").get<std::size_t>(), j.at("m").get<std::size_t>(), j.at("q").get<std::size_t>(),
          j.at("s").get<std::size_t>(), j.at("t").get<std::size_t>()};
}

json parse_json(std::istream& in) {
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
}

/// Wraps json lookups so malformed documents surface as ParseError.
template <class Fn>
auto guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

void dump(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

}  // namespace

void write_vertices_csv(std::ostream& out, const VertexList& vertices) {
  const std::size_t d = vertices.vertices.empty() ? 0 : vertices.vertices.front().size();
  for (std::size_t i = 0; i < d; ++i) out << (i ? "," : "") << 'w' << i + 1;
  out << '\n';
  for (const auto& v : vertices.vertices) {
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << to_string(v[i]);
    out << '\n';
  }
}

VertexList read_vertices_csv(std::istream& in) {
  VertexList list;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    line = detail::trim(line);
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.front() == 'w') continue;
    }
    RationalVector v;
    for (const auto& tok : detail::split(line, ',')) v.push_back(parse_rational(detail::trim(tok)));
    if (!list.vertices.empty() && v.size() != list.vertices.front().size()) {
      throw ParseError("ragged vertex file");
    }
    list.vertices.push_back(std::move(v));
  }
  return list;
}

PolytopeShape shape_of(const OptimalPolytope& polytope) {
  return {polytope.d, polytope.m, polytope.q, polytope.s, polytope.t};
}

void write_vertices_json(std::ostream& out, const OptimalPolytope& polytope, const VertexList& vertices) {
  json j = shape_json(shape_of(polytope));
  j["ell"] = vertices.size();
  j["vertices"] = json::array();
  for (const auto& v : vertices.vertices) j["vertices"].push_back(rationals(v));
  dump(out, j);
}

VertexFile read_vertices_json(std::istream& in) {
  const json j = parse_json(in);
  return guarded([&] {
    VertexFile f;
    f.shape = shape_from(j);
    for (const auto& v : j.at("vertices")) f.vertices.vertices.push_back(rationals_from(v));
    if (f.vertices.size() != j.at("ell").get<std::size_t>()) throw ParseError("ell disagrees with the vertex list");
    return f;
  });
}

Report make_report(const VodCatalog& catalog, std::size_t n_max) {
  Report r;
  r.problem = catalog.problem;
  r.shape = shape_of(catalog.polytope);
  r.bounds = catalog.bounds;
  r.vertices = catalog.vertices;
  r.info = catalog.info;
  r.orbit_of = catalog.orbits.orbit_of;
  r.orbits = catalog.orbits.orbits;
  r.weight_ranges = weight_ranges(catalog);
  r.achievable = exact_design_sizes(catalog, n_max);
  return r;
}

void write_report_json(std::ostream& out, const Report& r) {
  json j;
  j["problem"] = r.problem;
  j.update(shape_json(r.shape));
  j["ell"] = r.vertices.size();
  j["bounds"] = {{"sperner_upper", to_string(r.bounds.sperner_upper)},
                 {"subset_upper", to_string(r.bounds.subset_upper)},
                 {"mcmullen_upper", to_string(r.bounds.mcmullen_upper)},
                 {"lower_cover", to_string(r.bounds.lower_cover)},
                 {"lower_dim", to_string(r.bounds.lower_dim)}};
  j["vertices"] = json::array();
  for (std::size_t v = 0; v < r.vertices.size(); ++v) {
    j["vertices"].push_back({{"weights", rationals(r.vertices.vertices[v])},
                             {"support", one_based(r.info[v].support)},
                             {"N", to_string(r.info[v].size)},
                             {"orbit", r.orbit_of[v] + 1}});
  }
  j["orbits"] = json::array();
  for (const auto& o : r.orbits) j["orbits"].push_back({{"representative", o.representative + 1}, {"size", o.size()}});
  j["weight_ranges"] = json::array();
  for (const auto& w : r.weight_ranges) j["weight_ranges"].push_back({to_string(w.lo), to_string(w.hi)});
  json sizes = {{"gcd", to_string(r.achievable.gcd)}, {"n_max", r.achievable.n_max}, {"sizes", r.achievable.sizes}};
  sizes["stable_from"] = r.achievable.stable_from ? json(*r.achievable.stable_from) : json(nullptr);
  sizes["realizations"] = json::array();
  for (const auto& combo : r.achievable.realizations) {
    json c = json::array();
    for (const auto& [v, k] : combo) c.push_back({v + 1, k});
    sizes["realizations"].push_back(c);
  }
  j["achievable_sizes"] = sizes;
  dump(out, j);
}

Report read_report_json(std::istream& in) {
  const json j = parse_json(in);
  return guarded([&] {
    Report r;
    r.problem = j.at("problem").get<std::string>();
    r.shape = shape_from(j);
    const auto& b = j.at("bounds");
    r.bounds = {integer_from(b.at("sperner_upper")), integer_from(b.at("subset_upper")),
                integer_from(b.at("mcmullen_upper")), integer_from(b.at("lower_cover")),
                integer_from(b.at("lower_dim"))};
    for (const auto& v : j.at("vertices")) {
      r.vertices.vertices.push_back(rationals_from(v.at("weights")));
      r.info.push_back({zero_based(v.at("support")), integer_from(v.at("N"))});
      r.orbit_of.push_back(v.at("orbit").get<std::size_t>() - 1);
    }
    for (const auto& o : j.at("orbits")) r.orbits.push_back({o.at("representative").get<std::size_t>() - 1, {}});
    for (std::size_t v = 0; v < r.orbit_of.size(); ++v) r.orbits.at(r.orbit_of[v]).members.push_back(v);
    for (const auto& w : j.at("weight_ranges")) {
      r.weight_ranges.push_back({parse_rational(w.at(0).get<std::string>()), parse_rational(w.at(1).get<std::string>())});
    }
    const auto& s = j.at("achievable_sizes");
    r.achievable.gcd = integer_from(s.at("gcd"));
    r.achievable.n_max = s.at("n_max").get<std::size_t>();
    r.achievable.sizes = s.at("sizes").get<std::vector<std::size_t>>();
    if (!s.at("stable_from").is_null()) r.achievable.stable_from = s.at("stable_from").get<std::size_t>();
    for (const auto& c : s.at("realizations")) {
      std::vector<std::pair<std::size_t, std::size_t>> combo;
      for (const auto& term : c) combo.emplace_back(term.at(0).get<std::size_t>() - 1, term.at(1).get<std::size_t>());
      r.achievable.realizations.push_back(std::move(combo));
    }
    if (r.vertices.size() != j.at("ell").get<std::size_t>()) throw ParseError("ell disagrees with the vertex list");
    return r;
  });
}

void write_orbits_json(std::ostream& out, const VodCatalog& catalog) {
  json j;
  j["problem"] = catalog.problem;
  j["ell"] = catalog.ell();
  j["orbits"] = json::array();
  for (const auto& o : catalog.orbits.orbits) {
    const auto& inf = catalog.info[o.representative];
    j["orbits"].push_back({{"representative", o.representative + 1},
                           {"size", o.size()},
                           {"support_size", inf.support.size()},
                           {"N", to_string(inf.size)},
                           {"members", one_based(o.members)}});
  }
  dump(out, j);
}

void write_projection_csv(std::ostream& out, const Projection& p) {
  for (auto a : p.axes) out << 'w' << a + 1 << ',';
  out << "multiplicity\n";
  for (const auto& pt : p.points) {
    for (const auto& c : pt.coords) out << to_string(c) << ',';
    out << pt.multiplicity() << '\n';
  }
}

void write_projection_json(std::ostream& out, const Projection& p) {
  json j;
  j["axes"] = one_based(p.axes);
  j["dimension"] = p.dimension;
  j["points"] = json::array();
  for (const auto& pt : p.points) {
    j["points"].push_back({{"coords", rationals(pt.coords)},
                           {"multiplicity", pt.multiplicity()},
                           {"vertices", one_based(pt.vertices)}});
  }
  j["extreme_points"] = one_based(p.extreme_points);
  j["facets"] = json::array();
  for (const auto& f : p.facets) {
    j["facets"].push_back({{"normal", rationals(f.normal)}, {"offset", to_string(f.offset)}, {"points", one_based(f.points)}});
  }
  dump(out, j);
}

void write_verdict_json(std::ostream& out, const DesignProblem& problem, const Verdict& verdict, std::size_t s,
                        std::size_t t) {
  json j;
  j["problem"] = problem.name;
  j["passed"] = verdict.passed;
  j["d"] = problem.d();
  j["m"] = problem.m;
  j["p"] = problem.p;
  j["s"] = s;
  j["t"] = t;
  j["threshold"] = to_string(verdict.threshold);
  j["variance"] = rationals(verdict.variance);
  j["equality_set"] = one_based(verdict.equality_set);
  j["strict_set"] = one_based(verdict.strict_set);
  j["violations"] = one_based(verdict.violations);
  dump(out, j);
}

void write_secondary_json(std::ostream& out, const std::string& objective, const SecondaryResult& r) {
  json j;
  j["objective"] = objective;
  j["parametrization"] = std::string(parametrization_name(r.parametrization));
  j["weights"] = r.weights;
  j["coordinates"] = r.coordinates;
  j["value"] = r.value;
  j["gap"] = r.gap;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  dump(out, j);
}

void write_sizes_json(std::ostream& out, const AchievableSizes& s) {
  json j = {{"gcd", to_string(s.gcd)}, {"n_max", s.n_max}, {"sizes", s.sizes}};
  j["stable_from"] = s.stable_from ? json(*s.stable_from) : json(nullptr);
  dump(out, j);
}

RationalVector read_rational_vector(std::istream& in) {
  RationalVector v;
  std::string line;
  while (std::getline(in, line)) {
    for (const auto& tok : detail::tokens(detail::strip_comment(line))) v.push_back(parse_rational(tok));
  }
  return v;
}

}  // namespace vod
