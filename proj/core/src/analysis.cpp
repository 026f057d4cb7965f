#include "vod/analysis.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>

#include "parallel.hpp"
#include "vod/error.hpp"

namespace vod {

namespace {

/// Support of a weight vector as a bitmask over Y.
class Mask {
 public:
  explicit Mask(std::size_t n) : words_((n + 63) / 64, 0) {}

  static Mask of(std::span<const Rational> w) {
    Mask m(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (sgn(w[i]) != 0) m.words_[i >> 6] |= std::uint64_t{1} << (i & 63);
    }
    return m;
  }

  bool subset_of(const Mask& o) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      if (words_[k] & ~o.words_[k]) return false;
    }
    return true;
  }

  friend bool operator==(const Mask&, const Mask&) = default;

 private:
  std::vector<std::uint64_t> words_;
};

std::vector<std::size_t> support_of(std::span<const Rational> w) {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (sgn(w[i]) != 0) s.push_back(i);
  }
  return s;
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

void check_permutation(const Permutation& g, std::size_t d) {
  if (g.size() != d) throw DimensionMismatch("generator acts on " + std::to_string(g.size()) + " points, not " + std::to_string(d));
  std::vector<bool> seen(d, false);
  for (auto x : g) {
    if (x >= d || seen[x]) throw InvalidArgument("generator is not a permutation");
    seen[x] = true;
  }
}

std::optional<std::size_t> to_size(const Integer& x) {
  if (x < 0 || !x.fits_ulong_p()) return std::nullopt;
  return static_cast<std::size_t>(x.get_ui());
}

}  // namespace

bool BoundsRecord::sandwiches(std::size_t ell) const {
  const Integer l = static_cast<unsigned long>(ell);
  return lower_cover <= l && lower_dim <= l && l <= sperner_upper && l <= subset_upper && l <= mcmullen_upper;
}

BoundsRecord compute_bounds(std::size_t d, std::size_t s, std::size_t t) {
  BoundsRecord b;
  b.sperner_upper = binomial(d, d / 2);
  b.subset_upper = binomial(d, s);
  b.mcmullen_upper = binomial(d - (t + 1) / 2, s) + binomial(d - (t + 2) / 2, s);
  b.lower_cover = s == 0 ? Integer(0) : Integer(static_cast<unsigned long>((d + s - 1) / s));
  b.lower_dim = static_cast<unsigned long>(t + 1);
  return b;
}

std::vector<std::size_t> OrbitPartition::sorted_sizes() const {
  std::vector<std::size_t> sizes;
  for (const auto& o : orbits) sizes.push_back(o.size());
  std::sort(sizes.rbegin(), sizes.rend());
  return sizes;
}

OrbitPartition classify_orbits(const OptimalPolytope& polytope, const VertexList& vertices,
                               const std::vector<Permutation>& generators, unsigned threads) {
  const std::size_t ell = vertices.size();
  std::vector<std::size_t> parent(ell);
  std::iota(parent.begin(), parent.end(), 0);
  threads = resolve_threads(threads);

  for (std::size_t gi = 0; gi < generators.size(); ++gi) {
    const auto& g = generators[gi];
    check_permutation(g, polytope.d);
    std::vector<std::size_t> image(ell);
    detail::parallel_chunks(ell, threads, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t j = lo; j < hi; ++j) {
        const RationalVector w = permute_weights(g, vertices.vertices[j]);
        const auto idx = vertices.find(w);
        if (idx) {
          image[j] = *idx;
          continue;
        }
        if (!membership(polytope, w)) {
          throw SymmetryError("generator " + std::to_string(gi + 1) + " maps vertex " + std::to_string(j + 1) +
                              " outside P_*");
        }
        throw SymmetryError("generator " + std::to_string(gi + 1) + " maps vertex " + std::to_string(j + 1) +
                            " to a point of P_* that is not a listed vertex");
      }
    });
    for (std::size_t j = 0; j < ell; ++j) {
      const std::size_t a = find_root(parent, j);
      const std::size_t b = find_root(parent, image[j]);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }

  // Roots are the smallest member of each class because unions keep the
  // smaller index, so orbits come out ordered by representative.
  OrbitPartition part;
  part.orbit_of.assign(ell, 0);
  std::map<std::size_t, std::size_t> index_of_root;
  for (std::size_t j = 0; j < ell; ++j) {
    const std::size_t root = find_root(parent, j);
    auto [it, inserted] = index_of_root.try_emplace(root, part.orbits.size());
    if (inserted) part.orbits.push_back(Orbit{root, {}});
    part.orbits[it->second].members.push_back(j);
    part.orbit_of[j] = it->second;
  }
  return part;
}

VodCatalog make_catalog(std::string problem, OptimalPolytope polytope, VertexList vertices,
                        const std::vector<Permutation>& generators, unsigned threads) {
  VodCatalog cat;
  cat.problem = std::move(problem);
  cat.info.resize(vertices.size());
  detail::parallel_chunks(vertices.size(), resolve_threads(threads), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t j = lo; j < hi; ++j) {
      cat.info[j].support = support_of(vertices.vertices[j]);
      cat.info[j].size = denominator_lcm(vertices.vertices[j]);
    }
  });
  cat.orbits = classify_orbits(polytope, vertices, generators, threads);
  cat.bounds = compute_bounds(polytope.d, polytope.s, polytope.t);
  cat.polytope = std::move(polytope);
  cat.vertices = std::move(vertices);
  return cat;
}

VodCatalog analyze(const CatalogModel& model, const EnumOptions& options) {
  OptimalPolytope poly = build_h_representation(model.problem, model.maximal_design);
  VertexList vertices = enumerate_vertices(poly, options);
  return make_catalog(model.problem.name, std::move(poly), std::move(vertices), model.symmetry_generators,
                      options.threads);
}

std::vector<std::size_t> absolutely_minimal(const VodCatalog& catalog) {
  std::vector<std::size_t> out;
  if (catalog.info.empty()) return out;
  std::size_t best = catalog.polytope.d + 1;
  for (const auto& inf : catalog.info) best = std::min(best, inf.support.size());
  for (std::size_t j = 0; j < catalog.info.size(); ++j) {
    if (catalog.info[j].support.size() == best) out.push_back(j);
  }
  return out;
}

MinimalityResult minimality_check(const VodCatalog& catalog, std::span<const Rational> w) {
  if (!membership(catalog.polytope, w)) throw InvalidArgument("design is not in P_*");
  MinimalityResult res;
  if (independent_support(catalog.polytope, w)) {
    res.minimal = true;
    return res;
  }
  const Mask s = Mask::of(w);
  for (std::size_t j = 0; j < catalog.ell(); ++j) {
    const Mask v = Mask::of(catalog.vertices.vertices[j]);
    if (v.subset_of(s) && !(v == s)) {
      res.witness = j;
      break;
    }
  }
  return res;
}

std::vector<DecompositionTerm> caratheodory_decompose(const VodCatalog& catalog, std::span<const Rational> w) {
  if (!membership(catalog.polytope, w)) throw InvalidArgument("point is not in P_*");
  std::vector<DecompositionTerm> terms;
  RationalVector x(w.begin(), w.end());
  Rational mass = 1;
  while (true) {
    if (independent_support(catalog.polytope, x)) {
      const auto idx = catalog.vertices.find(x);
      if (!idx) throw InvalidArgument("vertex missing from the catalog");
      terms.push_back({*idx, mass});
      return terms;
    }
    // Some vertex lives on the face spanned by supp(x). Pushing x away from
    // it until a coordinate vanishes lands on a proper face of that face.
    const Mask sx = Mask::of(x);
    std::optional<std::size_t> pick;
    for (std::size_t j = 0; j < catalog.ell() && !pick; ++j) {
      if (Mask::of(catalog.vertices.vertices[j]).subset_of(sx)) pick = j;
    }
    if (!pick) throw InvalidArgument("no catalog vertex on the face of the point");
    const auto& v = catalog.vertices.vertices[*pick];
    std::optional<Rational> theta;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (sgn(v[i]) > 0) {
        Rational r = x[i] / v[i];
        if (!theta || r < *theta) theta = r;
      }
    }
    terms.push_back({*pick, mass * *theta});
    const Rational rest = 1 - *theta;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = (x[i] - *theta * v[i]) / rest;
    mass *= rest;
  }
}

RationalVector recombine(const VodCatalog& catalog, const std::vector<DecompositionTerm>& terms) {
  RationalVector w(catalog.polytope.d);
  for (const auto& t : terms) {
    const auto& v = catalog.vertices.vertices.at(t.vertex);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += t.coefficient * v[i];
  }
  return w;
}

Design reduce_support(const DesignProblem& problem, const Design& design) {
  if (design.weights.size() != problem.d()) throw DimensionMismatch("design length differs from the support size");
  RationalVector w = design.weights;
  const std::size_t m = problem.m;
  const std::size_t q = m * (m + 1) / 2;
  while (true) {
    const auto supp = support_of(w);
    RationalMatrix b(q + 1, supp.size());
    for (std::size_t j = 0; j < supp.size(); ++j) {
      const auto& f = problem.regressors[supp[j]];
      std::size_t row = 0;
      for (std::size_t c = 0; c < m; ++c) {
        for (std::size_t r = c; r < m; ++r) b(row++, j) = f[r] * f[c];
      }
      b(q, j) = 1;
    }
    const RationalMatrix null = nullspace_basis(b);
    if (null.cols() == 0) break;
    // The direction sums to zero, so it has a negative entry.
    std::optional<Rational> theta;
    for (std::size_t j = 0; j < supp.size(); ++j) {
      if (sgn(null(j, 0)) < 0) {
        Rational r = w[supp[j]] / -null(j, 0);
        if (!theta || r < *theta) theta = r;
      }
    }
    for (std::size_t j = 0; j < supp.size(); ++j) w[supp[j]] += *theta * null(j, 0);
  }
  return Design{std::move(w)};
}

std::vector<Interval> weight_ranges(const VodCatalog& catalog) {
  std::vector<Interval> out(catalog.polytope.d);
  if (catalog.ell() == 0) return out;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].lo = out[i].hi = catalog.vertices.vertices[0][i];
  }
  for (const auto& v : catalog.vertices.vertices) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (v[i] < out[i].lo) out[i].lo = v[i];
      if (v[i] > out[i].hi) out[i].hi = v[i];
    }
  }
  return out;
}

Design barycentric_design(const VodCatalog& catalog) {
  if (catalog.ell() == 0) throw InvalidArgument("empty vertex list");
  RationalVector w(catalog.polytope.d);
  for (const auto& v : catalog.vertices.vertices) {
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += v[i];
  }
  const Rational n = static_cast<unsigned long>(catalog.ell());
  for (auto& x : w) x /= n;
  return Design{std::move(w)};
}

MaximalSupportCertificate maximal_support_certificate(const VodCatalog& catalog, const Design& barycenter) {
  MaximalSupportCertificate cert;
  std::vector<bool> covered(catalog.polytope.d, false);
  for (const auto& inf : catalog.info) {
    for (auto i : inf.support) covered[i] = true;
  }
  cert.supports_cover_y = std::all_of(covered.begin(), covered.end(), [](bool b) { return b; });
  cert.strictly_positive = barycenter.weights.size() == catalog.polytope.d &&
                           std::all_of(barycenter.weights.begin(), barycenter.weights.end(),
                                       [](const Rational& x) { return sgn(x) > 0; });
  return cert;
}

AchievableSizes exact_design_sizes(const VodCatalog& catalog, std::size_t n_max) {
  AchievableSizes res;
  res.n_max = n_max;
  res.gcd = 0;
  // Distinct sizes with the first vertex realizing each.
  std::map<std::size_t, std::size_t> coins;
  for (std::size_t j = 0; j < catalog.ell(); ++j) {
    const Integer& nj = catalog.info[j].size;
    mpz_gcd(res.gcd.get_mpz_t(), res.gcd.get_mpz_t(), nj.get_mpz_t());
    const auto n = to_size(nj);
    if (n && *n <= n_max) coins.try_emplace(*n, j);
  }

  std::vector<std::size_t> via(n_max + 1, 0);
  std::vector<bool> reach(n_max + 1, false);
  reach[0] = true;
  for (std::size_t n = 1; n <= n_max; ++n) {
    for (const auto& [c, j] : coins) {
      if (c > n) break;
      if (reach[n - c]) {
        reach[n] = true;
        via[n] = c;
        break;
      }
    }
    if (!reach[n]) continue;
    res.sizes.push_back(n);
    std::map<std::size_t, std::size_t> count;
    for (std::size_t r = n; r > 0; r -= via[r]) ++count[coins.at(via[r])];
    res.realizations.emplace_back(count.begin(), count.end());
  }

  const auto g = to_size(res.gcd);
  if (g && *g > 0 && !res.sizes.empty()) {
    std::size_t from = res.sizes.back();
    for (std::size_t n = res.sizes.back(); n >= *g; n -= *g) {
      if (!reach[n]) break;
      from = n;
    }
    res.stable_from = from;
  }
  return res;
}

std::vector<std::size_t> efficient_round(std::span<const Rational> weights, std::size_t n) {
  const auto supp = support_of(weights);
  const std::size_t h = supp.size();
  if (h == 0) throw InvalidArgument("design has empty support");
  if (n < h) {
    throw InvalidArgument("size " + std::to_string(n) + " is below the support size " + std::to_string(h));
  }
  std::vector<std::size_t> counts(weights.size(), 0);
  Rational mult(static_cast<unsigned long>(2 * n) - static_cast<unsigned long>(h), 2);
  mult.canonicalize();
  std::size_t total = 0;
  for (auto i : supp) {
    const Rational x = mult * weights[i];
    Integer c;
    mpz_cdiv_q(c.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    counts[i] = static_cast<std::size_t>(c.get_ui());
    total += counts[i];
  }
  while (total < n) {
    std::size_t best = supp.front();
    Rational best_ratio = Rational(static_cast<unsigned long>(counts[best])) / weights[best];
    for (auto i : supp) {
      const Rational r = Rational(static_cast<unsigned long>(counts[i])) / weights[i];
      if (r < best_ratio) {
        best = i;
        best_ratio = r;
      }
    }
    ++counts[best];
    ++total;
  }
  while (total > n) {
    std::optional<std::size_t> best;
    Rational best_ratio;
    for (auto i : supp) {
      if (counts[i] == 0) continue;
      const Rational r = Rational(static_cast<unsigned long>(counts[i] - 1)) / weights[i];
      if (!best || r > best_ratio) {
        best = i;
        best_ratio = r;
      }
    }
    --counts[*best];
    --total;
  }
  return counts;
}

LinearCostResult minimize_linear_cost(const VodCatalog& catalog, std::span<const Rational> cost) {
  if (cost.size() != catalog.polytope.d) throw DimensionMismatch("cost vector length differs from d");
  LinearCostResult res;
  for (std::size_t j = 0; j < catalog.ell(); ++j) {
    const Rational v = dot(cost, catalog.vertices.vertices[j]);
    if (res.minimizers.empty() || v < res.value) {
      res.value = v;
      res.minimizers.assign(1, j);
    } else if (v == res.value) {
      res.minimizers.push_back(j);
    }
  }
  return res;
}

BlockDesignReport pbd_condition_check(const DesignProblem& problem, std::span<const Rational> vertex,
                                      const InformationMatrix& m_star) {
  if (vertex.size() != problem.d()) throw DimensionMismatch("vertex length differs from the support size");
  const std::size_t k = problem.k;
  if (m_star.rows() != k || m_star.cols() != k) throw DimensionMismatch("M_* must be k x k");
  const auto supp = support_of(vertex);

  BlockDesignReport rep;
  rep.treatments = k;
  rep.blocks = supp.size();
  rep.uniform = std::all_of(supp.begin(), supp.end(), [&](std::size_t i) { return vertex[i] == vertex[supp[0]]; });
  rep.replications.assign(k, 0);
  rep.concurrences.assign(k, std::vector<std::size_t>(k, 0));
  for (auto s : supp) {
    const auto& x = problem.points[s];
    std::size_t size = 0;
    for (std::size_t a = 0; a < k; ++a) {
      if (x[a] != 0 && x[a] != 1) throw InvalidArgument("support point is not a 0/1 vector");
      if (x[a] == 0) continue;
      ++size;
      ++rep.replications[a];
      for (std::size_t b = 0; b < k; ++b) {
        if (b != a && x[b] == 1) ++rep.concurrences[a][b];
      }
    }
    rep.block_sizes.push_back(size);
  }

  auto common = [](const std::vector<std::size_t>& v) -> std::optional<std::size_t> {
    if (v.empty() || std::any_of(v.begin(), v.end(), [&](std::size_t x) { return x != v[0]; })) return std::nullopt;
    return v[0];
  };
  rep.r = common(rep.replications);
  std::vector<std::size_t> off;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) off.push_back(rep.concurrences[a][b]);
  }
  rep.lambda = common(off);
  rep.block_size = common(rep.block_sizes);

  if (rep.blocks > 0) {
    const Rational b = static_cast<unsigned long>(rep.blocks);
    if (rep.r) rep.r_over_b = Rational(static_cast<unsigned long>(*rep.r)) / b;
    if (rep.lambda) rep.lambda_over_b = Rational(static_cast<unsigned long>(*rep.lambda)) / b;
    bool match = rep.uniform;
    for (std::size_t a = 0; a < k && match; ++a) {
      for (std::size_t c = 0; c < k && match; ++c) {
        const std::size_t n = a == c ? rep.replications[a] : rep.concurrences[a][c];
        match = Rational(static_cast<unsigned long>(n)) / b == m_star(a, c);
      }
    }
    rep.matches_information = match;
  }
  return rep;
}

Projection project(const VodCatalog& catalog, const std::vector<std::size_t>& axes) {
  if (axes.empty() || axes.size() > 3) throw InvalidArgument("projection needs 1 to 3 axes");
  for (std::size_t a = 0; a < axes.size(); ++a) {
    if (axes[a] >= catalog.polytope.d) throw InvalidArgument("projection axis out of range");
    for (std::size_t b = 0; b < a; ++b) {
      if (axes[a] == axes[b]) throw InvalidArgument("repeated projection axis");
    }
  }
  Projection proj;
  proj.axes = axes;
  std::map<RationalVector, std::vector<std::size_t>, LexLess> groups;
  for (std::size_t j = 0; j < catalog.ell(); ++j) {
    RationalVector c;
    for (auto a : axes) c.push_back(catalog.vertices.vertices[j][a]);
    groups[c].push_back(j);
  }
  for (auto& [c, vs] : groups) proj.points.push_back({c, std::move(vs)});

  const std::size_t n = proj.points.size();
  const std::size_t dim = axes.size();
  if (n == 0) return proj;
  RationalMatrix diff(n - 1, dim);
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t c = 0; c < dim; ++c) diff(i - 1, c) = proj.points[i].coords[c] - proj.points[0].coords[c];
  }
  // Coordinates that stay independent on the affine hull; the hull is
  // computed in them and the facet normals are padded with zeros.
  const auto chosen = rref(diff).pivots;
  const std::size_t r = chosen.size();
  proj.dimension = r;
  if (r == 0) {
    proj.extreme_points = {0};
    return proj;
  }
  auto sub = [&](std::size_t i) {
    RationalVector x;
    for (auto c : chosen) x.push_back(proj.points[i].coords[c]);
    return x;
  };
  std::vector<RationalVector> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back(sub(i));

  std::set<RationalVector, LexLess> seen;
  std::vector<std::size_t> idx(r);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    RationalVector normal;
    if (r == 1) {
      normal = {Rational(1)};
    } else {
      RationalMatrix dm(r - 1, r);
      for (std::size_t i = 1; i < r; ++i) {
        for (std::size_t c = 0; c < r; ++c) dm(i - 1, c) = pts[idx[i]][c] - pts[idx[0]][c];
      }
      const RationalMatrix ns = nullspace_basis(dm);
      if (ns.cols() == 1) normal = ns.col(0);
    }
    if (!normal.empty()) {
      const Rational off = dot(normal, pts[idx[0]]);
      int side = 0;
      bool split = false;
      for (std::size_t i = 0; i < n && !split; ++i) {
        const int sg = sgn(dot(normal, pts[i]) - off);
        if (sg == 0) continue;
        if (side == 0) side = sg;
        split = sg != side;
      }
      if (!split && side != 0) {
        if (side > 0) {
          for (auto& x : normal) x = -x;
        }
        if (seen.insert(normal).second) {
          HullFacet f;
          f.normal.assign(dim, Rational(0));
          for (std::size_t c = 0; c < r; ++c) f.normal[chosen[c]] = normal[c];
          f.offset = dot(normal, pts[idx[0]]);
          for (std::size_t i = 0; i < n; ++i) {
            if (dot(normal, pts[i]) == f.offset) f.points.push_back(i);
          }
          proj.facets.push_back(std::move(f));
        }
      }
    }
    // Next r-subset of the n points in lexicographic order.
    std::size_t pos = r;
    while (pos > 0 && idx[pos - 1] == n - r + pos - 1) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::size_t i = pos; i < r; ++i) idx[i] = idx[i - 1] + 1;
  }
  std::sort(proj.facets.begin(), proj.facets.end(), [](const HullFacet& a, const HullFacet& b) {
    return lex_compare(a.normal, b.normal) < 0;
  });

  for (std::size_t i = 0; i < n; ++i) {
    std::vector<RationalVector> rows;
    for (const auto& f : proj.facets) {
      if (std::binary_search(f.points.begin(), f.points.end(), i)) rows.push_back(f.normal);
    }
    RationalMatrix nm(rows.size(), dim);
    for (std::size_t a = 0; a < rows.size(); ++a) {
      for (std::size_t c = 0; c < dim; ++c) nm(a, c) = rows[a][c];
    }
    if (rank(nm) == r) proj.extreme_points.push_back(i);
  }
  return proj;
}

}  // namespace vod
