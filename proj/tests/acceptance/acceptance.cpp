// Acceptance gate. Prints one PASS/FAIL line per criterion; exit status is
// nonzero when any criterion fails. CBW k=5 and MEM k=5 run only with --slow.

#include <algorithm>
#include <bitset>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "vod/analysis.hpp"
#include "vod/catalog.hpp"
#include "vod/enumerate.hpp"
#include "vod/io.hpp"
#include "vod/secondary.hpp"

using namespace vod;

namespace {

// Pinned tolerances for criterion 11; every other criterion is exact.
constexpr double kWeightTol = 5e-3;
constexpr double kGapTol = 1e-8;
constexpr std::size_t kOracleCap = 1'000'000;
constexpr std::size_t kSizeHorizon = 200;

bool g_slow = false;

struct Instance {
  std::string key;
  Family family;
  std::size_t k;
  int p;
  std::size_t t;
  std::optional<std::size_t> ell;  ///< unset for dimension-only instances
  bool slow = false;
};

const std::vector<Instance>& instances() {
  static const std::vector<Instance> list = {
      {"sbw6D", Family::kSbw, 6, 0, 14, 150},       {"sbw6A", Family::kSbw, 6, -1, 5, 12},
      {"sbw7", Family::kSbw, 7, 0, 14, 150},        {"sbw8D", Family::kSbw, 8, 0, 90, {}},
      {"sbw8A", Family::kSbw, 8, -1, 42, {}},       {"cbw2", Family::kCbw, 2, 0, 2, 4},
      {"cbw3", Family::kCbw, 3, 0, 4, 16},          {"cbw4", Family::kCbw, 4, 0, 9, 32},
      {"cbw5", Family::kCbw, 5, 0, 21, 35328, true}, {"cbw6", Family::kCbw, 6, 0, 48, {}},
      {"mem3", Family::kMem, 3, 0, 1, 2},           {"mem4", Family::kMem, 4, 0, 5, 26},
      {"mem5", Family::kMem, 5, 0, 16, 14110, true}, {"int5", Family::kInt, 5, 0, 1, 2},
      {"int6", Family::kInt, 6, 0, 7, 78},          {"qwoi3", Family::kQwoi, 3, 0, 8, 66},
      {"qwoi4", Family::kQwoi, 4, 0, 48, {}},
  };
  return list;
}

const Instance& instance(const std::string& key) {
  for (const auto& in : instances()) {
    if (in.key == key) return in;
  }
  throw std::logic_error("unknown instance " + key);
}

bool in_tier(const Instance& in) { return g_slow || !in.slow; }

const CatalogModel& model(const std::string& key) {
  static std::map<std::string, CatalogModel> cache;
  auto it = cache.find(key);
  if (it == cache.end()) {
    const auto& in = instance(key);
    it = cache.emplace(key, build(in.family, in.k, in.p)).first;
  }
  return it->second;
}

const VodCatalog& catalog(const std::string& key) {
  static std::map<std::string, VodCatalog> cache;
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, analyze(model(key))).first;
  return it->second;
}

std::vector<std::string> enumerated_in_tier() {
  std::vector<std::string> keys;
  for (const auto& in : instances()) {
    if (in.ell && in_tier(in)) keys.push_back(in.key);
  }
  return keys;
}

std::string join(const std::vector<std::size_t>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "}";
}

struct Outcome {
  bool ok = true;
  std::vector<std::string> notes;
  std::vector<std::string> failures;

  void check(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      failures.push_back(what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

// ---------------------------------------------------------------------------
// Paper tables: k rows of factor levels and a weight row, one column per point.

Design table_design(const DesignProblem& problem, const std::vector<std::string>& rows, const std::string& weights) {
  DesignTable table;
  std::vector<std::vector<Rational>> levels;
  for (const auto& row : rows) {
    std::istringstream in(row);
    std::vector<Rational> r;
    for (std::string tok; in >> tok;) r.push_back(parse_rational(tok));
    levels.push_back(std::move(r));
  }
  const std::size_t n = levels.front().size();
  for (std::size_t j = 0; j < n; ++j) {
    RationalVector pt;
    for (const auto& r : levels) pt.push_back(r.at(j));
    table.points.push_back(std::move(pt));
  }
  std::istringstream win(weights);
  for (std::string tok; win >> tok;) table.weights.push_back(parse_rational(tok));
  if (table.weights.size() == 1) table.weights.assign(n, table.weights.front());
  return design_from_table(problem, table);
}

/// True when w or one of its images under the model's symmetry group is a vertex.
bool vertex_up_to_symmetry(const VodCatalog& cat, const std::vector<Permutation>& gens, const RationalVector& w) {
  std::set<RationalVector, LexLess> seen{w};
  std::vector<RationalVector> frontier{w};
  while (!frontier.empty()) {
    RationalVector cur = std::move(frontier.back());
    frontier.pop_back();
    if (cat.vertices.find(cur)) return true;
    for (const auto& g : gens) {
      auto img = permute_weights(g, cur);
      if (seen.insert(img).second) frontier.push_back(std::move(img));
    }
  }
  return false;
}

struct Named {
  std::string instance;
  std::string label;
  std::vector<std::string> rows;
  std::string weights;
};

const std::vector<Named>& named_designs() {
  static const std::vector<Named> list = {
      {"sbw6D", "SBW6D1",
       {"0 0 0 1 1 1 1", "0 1 1 0 0 1 1", "1 0 1 0 1 0 1", "1 1 0 1 0 0 1", "1 1 0 0 1 1 0", "1 0 1 1 0 1 0"},
       "1/7"},
      {"sbw6D", "SBW6D2",
       {"0 0 0 0 0 0 0 0 0 1 1 1 1 1 1 1 1 1 1 1 1", "0 0 0 1 1 1 1 1 1 0 0 0 0 0 0 1 1 1 1 1 1",
        "1 1 1 0 0 0 1 1 1 0 0 0 1 1 1 0 0 0 1 1 1", "1 1 1 0 1 1 0 0 1 0 1 1 0 0 1 0 1 1 0 0 1",
        "0 1 1 1 1 1 0 1 0 1 0 1 0 1 1 1 0 0 0 1 0", "1 0 1 1 0 1 1 1 0 1 1 1 1 0 0 0 0 1 1 0 0"},
       "1/21"},
      {"sbw6A", "SBW6A",
       {"0 0 0 0 0 1 1 1 1 1", "0 0 1 1 1 0 0 0 1 1", "1 1 0 0 1 0 0 1 0 1", "1 1 0 1 0 0 1 0 1 0",
        "0 1 1 1 0 1 0 1 0 0", "1 0 1 0 1 1 1 0 0 0"},
       "1/10"},
      {"cbw3", "CBW3 Hadamard submatrix", {"1 -1 -1 1", "1 -1 1 -1", "1 1 -1 -1"}, "1/4"},
      {"cbw4", "CBW4 Hadamard", {"1 1 1 1", "1 -1 -1 1", "1 -1 1 -1", "1 1 -1 -1"}, "1/4"},
      {"mem3", "Example 2, alpha=1", {"-1 1 1 -1", "-1 1 -1 1", "-1 -1 1 1"}, "1/4"},
      {"mem3", "Example 2, alpha=0", {"1 -1 -1 1", "1 -1 1 -1", "1 1 -1 -1"}, "1/4"},
      {"mem4", "MEM4 [H4, H4 with first row negated]",
       {"1 1 1 1 -1 -1 -1 -1", "1 -1 -1 1 1 -1 -1 1", "1 -1 1 -1 1 -1 1 -1", "1 1 -1 -1 1 1 -1 -1"}, "1/8"},
      {"mem4", "MEM4 [H4, -H4]",
       {"1 1 1 1 -1 -1 -1 -1", "1 -1 -1 1 -1 1 1 -1", "1 -1 1 -1 -1 1 -1 1", "1 1 -1 -1 -1 -1 1 1"}, "1/8"},
      {"mem4", "MEM4 11-point",
       {"-1 -1 -1 1 -1 -1 -1 1 1 1 1", "-1 -1 1 -1 -1 1 1 -1 -1 1 1", "-1 1 -1 -1 1 -1 1 -1 1 -1 1",
        "1 -1 -1 -1 1 1 -1 1 -1 -1 1"},
       "1/12 1/12 1/12 1/12 1/12 1/12 1/12 1/12 1/12 1/12 1/6"},
      {"int5", "INT5 strength-4 array",
       {"-1 -1 -1 -1 -1 -1 -1 -1 1 1 1 1 1 1 1 1", "-1 -1 -1 -1 1 1 1 1 -1 -1 -1 -1 1 1 1 1",
        "-1 -1 1 1 -1 -1 1 1 -1 -1 1 1 -1 -1 1 1", "-1 1 -1 1 -1 1 -1 1 -1 1 -1 1 -1 1 -1 1",
        "1 -1 -1 1 -1 1 1 -1 -1 1 1 -1 1 -1 -1 1"},
       "1/16"},
      {"qwoi3", "QWOI3 class of 4", {"-1 1 0 1 0 -1 0 -1 1", "-1 0 1 -1 0 1 -1 0 1", "-1 -1 -1 0 0 0 1 1 1"}, "1/9"},
      {"qwoi3", "QWOI3 class of 8", {"-1 1 0 0 -1 1 1 0 -1", "-1 0 1 -1 0 1 -1 0 1", "-1 -1 -1 0 0 0 1 1 1"}, "1/9"},
  };
  return list;
}

bool uniform_on_support(const RationalVector& v) {
  std::optional<Rational> w;
  for (const auto& x : v) {
    if (sgn(x) == 0) continue;
    if (w && *w != x) return false;
    w = x;
  }
  return true;
}

// ---------------------------------------------------------------------------

Outcome dimension_table() {
  Outcome o;
  std::size_t n = 0;
  for (const auto& in : instances()) {
    const auto& m = model(in.key);
    const auto poly = build_h_representation(m.problem, m.maximal_design);
    o.check(poly.t == in.t, in.key + ": t=" + std::to_string(poly.t) + ", expected " + std::to_string(in.t));
    ++n;
  }
  o.note(std::to_string(n) + " instances");
  return o;
}

Outcome vertex_counts() {
  Outcome o;
  for (const auto& key : enumerated_in_tier()) {
    const auto expected = *instance(key).ell;
    const auto ell = catalog(key).ell();
    o.check(ell == expected, key + ": ell=" + std::to_string(ell) + ", expected " + std::to_string(expected));
  }
  o.note(std::to_string(enumerated_in_tier().size()) + " instances");
  return o;
}

Outcome orbit_splits() {
  Outcome o;
  auto sizes = [](const std::string& key) { return catalog(key).orbits.sorted_sizes(); };
  using V = std::vector<std::size_t>;
  o.check(sizes("sbw6D") == V{120, 30}, "sbw6D orbits " + join(sizes("sbw6D")));
  o.check(sizes("sbw6A") == V{12}, "sbw6A orbits " + join(sizes("sbw6A")));
  o.check(sizes("mem4") == V{16, 8, 2}, "mem4 orbits " + join(sizes("mem4")));

  // INT k=6: 14 uniform and 64 nonuniform vertices; the 64 form one class.
  {
    const auto& cat = catalog("int6");
    V uniform_orbits, other_orbits;
    bool pure = true;
    for (const auto& orb : cat.orbits.orbits) {
      const bool u = uniform_on_support(cat.vertices.vertices[orb.representative]);
      for (auto j : orb.members) pure = pure && uniform_on_support(cat.vertices.vertices[j]) == u;
      (u ? uniform_orbits : other_orbits).push_back(orb.size());
    }
    std::sort(uniform_orbits.rbegin(), uniform_orbits.rend());
    const auto n_uniform = std::accumulate(uniform_orbits.begin(), uniform_orbits.end(), std::size_t{0});
    o.check(pure, "int6 orbit mixes uniform and nonuniform vertices");
    o.check(n_uniform == 14, "int6 uniform vertices " + std::to_string(n_uniform));
    o.check(other_orbits == V{64}, "int6 nonuniform orbits " + join(other_orbits));
    o.note("int6 {14 = " + join(uniform_orbits) + ", 64}");
  }

  // QWOI k=3: {4, 8} among the twelve uniform 9-point vertices, 5 orbits on the other 54.
  {
    const auto& cat = catalog("qwoi3");
    V nine, rest;
    for (const auto& orb : cat.orbits.orbits) {
      const auto& rep = cat.vertices.vertices[orb.representative];
      const bool u9 = uniform_on_support(rep) && cat.info[orb.representative].support.size() == 9;
      (u9 ? nine : rest).push_back(orb.size());
    }
    std::sort(nine.rbegin(), nine.rend());
    std::sort(rest.rbegin(), rest.rend());
    o.check(nine == V{8, 4}, "qwoi3 uniform 9-point orbits " + join(nine));
    o.check(rest.size() == 5 && std::accumulate(rest.begin(), rest.end(), std::size_t{0}) == 54,
            "qwoi3 remaining orbits " + join(rest));
    o.note("qwoi3 " + join(nine) + " + " + join(rest));
  }

  if (g_slow) {
    const auto& cat = catalog("cbw5");
    o.check(cat.ell() == 35328, "cbw5 total " + std::to_string(cat.ell()));
    o.note("cbw5 classes " + join(cat.orbits.sorted_sizes()));
  }
  return o;
}

Outcome named_vertices() {
  Outcome o;
  std::size_t found = 0;
  for (const auto& nd : named_designs()) {
    const auto& m = model(nd.instance);
    const auto w = table_design(m.problem, nd.rows, nd.weights).weights;
    const bool ok = vertex_up_to_symmetry(catalog(nd.instance), m.symmetry_generators, w);
    o.check(ok, nd.label + " not found");
    found += ok;
  }
  // The 17-point vertices of QWOI k=3: sixteen weights 1/18 and one 1/9.
  const auto& q = catalog("qwoi3");
  std::size_t pattern = 0;
  for (const auto& v : q.vertices.vertices) {
    std::size_t small = 0, big = 0, nz = 0;
    for (const auto& x : v) {
      if (sgn(x) == 0) continue;
      ++nz;
      small += x == Rational(1, 18);
      big += x == Rational(1, 9);
    }
    if (nz == 17) {
      o.check(small == 16 && big == 1, "qwoi3 17-point vertex with another weight pattern");
      pattern += small == 16 && big == 1;
    }
  }
  o.check(pattern == 54, "qwoi3 17-point pattern count " + std::to_string(pattern));
  o.note(std::to_string(found) + "/" + std::to_string(named_designs().size()) + " tables, " +
         std::to_string(pattern) + " vertices with the 16 x 1/18 + 1/9 pattern");
  return o;
}

Outcome support_metadata() {
  Outcome o;
  if (g_slow) {
    const auto& cat = catalog("mem5");
    std::map<std::size_t, std::set<std::size_t>> seen;
    for (const auto& inf : cat.info) seen[inf.support.size()].insert(inf.size.get_ui());
    const std::map<std::size_t, std::set<std::size_t>> expected = {
        {8, {8}}, {11, {12}}, {12, {12}}, {13, {20}}, {15, {24}}, {16, {16, 28, 32, 36}}};
    o.check(seen == expected, "mem5 support/size table differs");
    o.note("mem5 6 support sizes");
  }
  const auto& cat = catalog("int6");
  std::size_t u32 = 0, n57 = 0;
  for (std::size_t j = 0; j < cat.ell(); ++j) {
    const auto& inf = cat.info[j];
    const bool u = uniform_on_support(cat.vertices.vertices[j]);
    if (u && inf.support.size() == 32 && inf.size == 32) ++u32;
    if (!u && inf.support.size() == 57 && inf.size == 80) ++n57;
  }
  o.check(u32 == 14 && n57 == 64 && cat.ell() == 78,
          "int6 " + std::to_string(u32) + " uniform/32, " + std::to_string(n57) + " nonuniform/57");
  o.note("int6 14 x (32, N=32), 64 x (57, N=80)");
  return o;
}

Outcome achievable_sizes() {
  Outcome o;
  auto check = [&](const std::string& key, const std::function<bool(std::size_t)>& expected) {
    const auto sizes = exact_design_sizes(catalog(key), kSizeHorizon);
    std::vector<std::size_t> want;
    for (std::size_t n = 1; n <= kSizeHorizon; ++n) {
      if (expected(n)) want.push_back(n);
    }
    o.check(sizes.sizes == want, key + " achievable sizes differ");
  };
  check("mem3", [](std::size_t n) { return n % 4 == 0; });
  if (g_slow) check("cbw5", [](std::size_t n) { return n % 4 == 0 && n >= 8; });
  check("int5", [](std::size_t n) { return n % 16 == 0; });
  check("int6", [](std::size_t n) { return n == 32 || (n % 16 == 0 && n >= 64); });
  check("qwoi3", [](std::size_t n) { return n % 9 == 0; });
  o.note("N <= " + std::to_string(kSizeHorizon));
  return o;
}

Outcome cost_minimization() {
  Outcome o;
  const auto& m = model("cbw5");
  const auto& cat = catalog("cbw5");
  const auto relabel = symmetry_generators(m.problem, SymmetryKinds{true, false, false});
  std::optional<std::vector<std::size_t>> first;
  for (const auto& [a, b] : std::vector<std::pair<long, long>>{{1, 2}, {2, 5}}) {
    RationalVector cost;
    for (std::size_t i = 0; i < m.problem.d(); ++i) {
      Rational c = 0;
      for (const auto& x : m.problem.points[i]) c += x < 0 ? a : b;
      cost.push_back(c);
    }
    const auto res = minimize_linear_cost(cat, cost);
    const std::string tag = "a=" + std::to_string(a) + ",b=" + std::to_string(b);
    o.check(res.minimizers.size() == 10, tag + ": " + std::to_string(res.minimizers.size()) + " minimizers");
    if (first) o.check(*first == res.minimizers, tag + ": minimizers depend on a, b");
    first = res.minimizers;

    VertexList mins;
    for (auto j : res.minimizers) mins.vertices.push_back(cat.vertices.vertices[j]);
    const auto part = classify_orbits(cat.polytope, mins, relabel);
    o.check(part.sorted_sizes() == std::vector<std::size_t>{5, 5}, tag + ": orbits " + join(part.sorted_sizes()));

    const VodCatalog sub = make_catalog("cbw5-mincost", cat.polytope, mins);
    const auto mincost_a = table_design(m.problem,
                                        {"1 -1 -1 -1 1 -1 -1 -1", "-1 1 -1 -1 -1 1 -1 -1", "-1 -1 1 -1 -1 -1 1 -1",
                                         "-1 -1 -1 1 -1 -1 -1 1", "-1 -1 -1 -1 1 1 1 1"},
                                        "1/8");
    const auto mincost_b = table_design(
        m.problem,
        {"1 -1 -1 -1 -1 -1 -1 -1 -1 -1 -1", "-1 1 -1 -1 -1 1 1 -1 1 -1 -1", "-1 -1 1 -1 -1 1 -1 1 -1 1 -1",
         "-1 -1 -1 1 -1 -1 1 1 -1 -1 1", "-1 -1 -1 -1 1 -1 -1 -1 1 1 1"},
        "1/6 1/12 1/12 1/12 1/12 1/12 1/12 1/12 1/12 1/12 1/12");
    o.check(vertex_up_to_symmetry(sub, relabel, mincost_a.weights), tag + ": mincostA not a minimizer");
    o.check(vertex_up_to_symmetry(sub, relabel, mincost_b.weights), tag + ": mincostB not a minimizer");
  }
  o.note("10 minimizers, relabel orbits {5,5}, (a,b) in {(1,2),(2,5)}");
  return o;
}

Outcome block_designs() {
  Outcome o;
  {
    const auto& m = model("sbw6D");
    const auto& cat = catalog("sbw6D");
    std::size_t small = 0, large = 0;
    for (const auto& v : cat.vertices.vertices) {
      const auto rep = pbd_condition_check(m.problem, v, cat.polytope.m_star);
      const bool ok = rep.is_pbd() && rep.matches_information && rep.r_over_b == Rational(4, 7) &&
                      rep.lambda_over_b == Rational(2, 7);
      o.check(ok, "sbw6D vertex is not a PBD with r/b=4/7, lambda/b=2/7");
      if (!ok) continue;
      const auto key = std::tuple(*rep.r, *rep.lambda, rep.blocks);
      small += key == std::tuple(std::size_t{4}, std::size_t{2}, std::size_t{7});
      large += key == std::tuple(std::size_t{12}, std::size_t{6}, std::size_t{21});
    }
    o.check(small + large == cat.ell(), "sbw6D vertex with other (r, lambda, b)");
    o.note("sbw6D " + std::to_string(small) + " x (4,2,7), " + std::to_string(large) + " x (12,6,21)");
  }
  {
    const auto& m = model("sbw6A");
    const auto& cat = catalog("sbw6A");
    std::size_t bibd = 0;
    for (const auto& v : cat.vertices.vertices) {
      const auto rep = pbd_condition_check(m.problem, v, cat.polytope.m_star);
      const bool ok = rep.is_bibd() && rep.treatments == 6 && *rep.r == 5 && *rep.lambda == 2 && rep.blocks == 10 &&
                      *rep.block_size == 3;
      o.check(ok, "sbw6A vertex is not the (6,5,2,10,3) BIBD");
      bibd += ok;
    }
    o.note("sbw6A " + std::to_string(bibd) + " x BIBD(6,5,2,10,3)");
  }
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  std::size_t compared = 0;
  auto compare = [&](const std::string& name, const OptimalPolytope& poly, const VertexList& dd) {
    if (binomial(poly.d, poly.s) > kOracleCap) return;
    OracleOptions opts;
    opts.subset_cap = kOracleCap;
    opts.threads = resolve_threads(0);
    o.check(oracle_enumerate(poly, opts) == dd, name + ": oracle and double description differ");
    ++compared;
  };
  for (const auto& key : enumerated_in_tier()) compare(key, catalog(key).polytope, catalog(key).vertices);
  for (const auto& [f, k, p] : std::vector<std::tuple<Family, std::size_t, int>>{
           {Family::kCbw, 3, -1}, {Family::kCbw, 3, -2}, {Family::kMem, 3, -1}, {Family::kMem, 4, -1}}) {
    const auto m = build(f, k, p);
    const auto poly = build_h_representation(m.problem, m.maximal_design);
    compare(m.problem.name, poly, enumerate_vertices(poly));
  }
  for (const char* file : {"quadratic_t0.problem", "single_point.problem", "square_corners.problem"}) {
    const auto m = load_problem(std::string(VOD_TEST_DATA_DIR) + "/" + file);
    const auto poly = build_h_representation(m.problem, m.maximal_design);
    compare(file, poly, enumerate_vertices(poly));
  }
  o.note(std::to_string(compared) + " problems with C(d,s) <= 1e6");
  return o;
}

using Mask = std::bitset<128>;

Outcome invariants() {
  Outcome o;
  std::mt19937_64 rng(20240611);
  for (const auto& key : enumerated_in_tier()) {
    const auto& cat = catalog(key);
    const auto& poly = cat.polytope;

    std::vector<Mask> masks;
    bool feasible = true, sizes_ok = true;
    for (const auto& v : cat.vertices.vertices) {
      feasible = feasible && membership(poly, v) && sum(v) == 1;
      Mask mk;
      for (std::size_t i = 0; i < v.size(); ++i) mk[i] = sgn(v[i]) > 0;
      sizes_ok = sizes_ok && mk.count() >= poly.m && mk.count() <= poly.s;
      masks.push_back(mk);
    }
    o.check(feasible, key + ": a vertex violates A v = b, v >= 0 or 1'v = 1");
    o.check(sizes_ok, key + ": support size outside [m, s]");

    bool sperner = true;
    for (std::size_t i = 0; i < masks.size() && sperner; ++i) {
      for (std::size_t j = 0; j < masks.size(); ++j) {
        if (i != j && (masks[i] & masks[j]) == masks[i]) {
          sperner = false;
          break;
        }
      }
    }
    o.check(sperner, key + ": supports are not an antichain");

    // Bounds recomputed from their definitions.
    const std::size_t d = poly.d, s = poly.s, t = poly.t;
    const Integer ell(static_cast<unsigned long>(cat.ell()));
    const Integer mcmullen = binomial(d - (t + 1) / 2, s) + binomial(d - (t + 2) / 2, s);
    const bool sandwich = ell <= binomial(d, d / 2) && ell <= binomial(d, s) && ell <= mcmullen &&
                          ell >= Integer(static_cast<unsigned long>((d + s - 1) / s)) &&
                          ell >= Integer(static_cast<unsigned long>(t + 1));
    o.check(sandwich && cat.bounds.sandwiches(cat.ell()), key + ": vertex count outside the bounds");

    std::uniform_int_distribution<std::size_t> pick(0, cat.ell() - 1);
    std::uniform_int_distribution<long> weight(1, 9);
    bool decomp = true;
    for (int trial = 0; trial < 100; ++trial) {
      RationalVector x(d);
      Rational total = 0;
      std::vector<std::pair<std::size_t, long>> parts;
      for (int r = 0; r < 3; ++r) parts.emplace_back(pick(rng), weight(rng));
      for (const auto& [j, c] : parts) total += c;
      for (const auto& [j, c] : parts) {
        for (std::size_t i = 0; i < d; ++i) x[i] += Rational(c) / total * cat.vertices.vertices[j][i];
      }
      const auto terms = caratheodory_decompose(cat, x);
      Rational coef = 0;
      bool positive = true;
      for (const auto& term : terms) {
        coef += term.coefficient;
        positive = positive && sgn(term.coefficient) > 0;
      }
      decomp = decomp && positive && coef == 1 && terms.size() <= t + 1 && recombine(cat, terms) == x;
    }
    o.check(decomp, key + ": decomposition does not reconstruct");

    auto order = default_insertion_order(poly);
    std::shuffle(order.begin(), order.end(), rng);
    EnumOptions shuffled;
    shuffled.insertion_order = order;
    o.check(enumerate_vertices(poly, shuffled) == cat.vertices, key + ": result depends on insertion order");

    EnumOptions single, multi;
    single.threads = 1;
    multi.threads = 4;
    std::ostringstream a, b;
    write_vertices_json(a, poly, enumerate_vertices(poly, single));
    write_vertices_json(b, poly, enumerate_vertices(poly, multi));
    o.check(a.str() == b.str(), key + ": --threads 1 output differs from --threads 4");
  }
  o.note(std::to_string(enumerated_in_tier().size()) + " instances, 100 decompositions each");
  return o;
}

Outcome secondary_optimization() {
  Outcome o;
  const auto& m = model("mem4");
  const auto& cat = catalog("mem4");
  const std::vector<std::string> r_by_plus = {"1", "0.95", "0.85", "0.70", "0.50"};
  const std::vector<Rational> pattern = {Rational(5, 32), 0, Rational(3, 32), Rational(2, 32), Rational(1, 32)};
  RationalVector r;
  std::vector<double> target;
  for (std::size_t i = 0; i < m.problem.d(); ++i) {
    const auto& y = m.problem.points[i];
    const auto plus = static_cast<std::size_t>(std::count(y.begin(), y.end(), Rational(1)));
    r.push_back(parse_rational(r_by_plus[plus]));
    target.push_back(pattern[plus].get_d());
  }
  const auto obj = heteroskedastic_d_objective(m.problem, r);
  double worst_dev = 0, worst_gap = 0;
  for (auto form : {Parametrization::kReduced, Parametrization::kAmbient, Parametrization::kVertex}) {
    OptimizeConfig cfg;
    cfg.parametrization = form;
    cfg.tol = kGapTol;
    const auto res = optimize(cat, *obj, cfg);
    const std::string tag(parametrization_name(form));
    o.check(res.converged && res.gap <= kGapTol, tag + ": gap " + std::to_string(res.gap));
    double dev = 0;
    for (std::size_t i = 0; i < target.size(); ++i) dev = std::max(dev, std::abs(res.weights[i] - target[i]));
    o.check(dev <= kWeightTol, tag + ": max deviation " + std::to_string(dev));
    o.check(membership(cat.polytope, snap_to_polytope(res)), tag + ": snapped design not in P_*");
    worst_dev = std::max(worst_dev, dev);
    worst_gap = std::max(worst_gap, res.gap);
  }
  std::ostringstream s;
  s << "max |w - pattern| " << worst_dev << " (tol " << kWeightTol << "), gap " << worst_gap << " (tol " << kGapTol
    << "), 3 parametrizations";
  o.note(s.str());
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--slow") g_slow = true;
  }
  struct Criterion {
    int id;
    const char* title;
    std::function<Outcome()> run;
    bool needs_slow = false;
  };
  const std::vector<Criterion> criteria = {
      {1, "dimension table", dimension_table},
      {2, "vertex counts", vertex_counts},
      {3, "orbit splits", orbit_splits},
      {4, "named vertices", named_vertices},
      {5, "support and size metadata", support_metadata},
      {6, "achievable exact sizes", achievable_sizes},
      {7, "cost minimization", cost_minimization, true},
      {8, "block-design correspondences", block_designs},
      {9, "oracle equivalence", oracle_equivalence},
      {10, "invariant suite", invariants},
      {11, "secondary optimization", secondary_optimization},
  };

  std::cout << "tier: " << (g_slow ? "slow (all instances)" : "fast (cbw5, mem5 skipped)") << '\n';
  bool all = true;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    if (c.needs_slow && !g_slow) {
      std::cout << "SKIP [" << c.id << "] " << c.title << ": needs --slow\n";
      continue;
    }
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.ok = false;
      out.failures.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    all = all && out.ok;
    std::cout << (out.ok ? "PASS" : "FAIL") << " [" << c.id << "] " << c.title;
    const auto& detail = out.ok ? out.notes : out.failures;
    for (std::size_t i = 0; i < detail.size(); ++i) std::cout << (i ? "; " : ": ") << detail[i];
    std::cout << " (" << std::fixed << std::setprecision(1) << secs << "s)" << std::defaultfloat << '\n';
  }
  return all ? 0 : 1;
}
