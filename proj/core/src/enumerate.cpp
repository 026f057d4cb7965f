#include "vod/enumerate.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <numeric>
#include <set>
#include <thread>

#include "vod/error.hpp"

namespace vod {

unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

namespace {

/// Fixed-width bitset over inequality indices.
template <std::size_t W>
struct Bits {
  std::array<std::uint64_t, W> words{};

  void set(std::size_t i) { words[i >> 6] |= std::uint64_t{1} << (i & 63); }
  bool test(std::size_t i) const { return (words[i >> 6] >> (i & 63)) & 1U; }

  int count() const {
    int c = 0;
    for (auto w : words) c += std::popcount(w);
    return c;
  }

  bool subset_of(const Bits& other) const {
    for (std::size_t k = 0; k < W; ++k) {
      if (words[k] & ~other.words[k]) return false;
    }
    return true;
  }

  friend Bits operator&(const Bits& a, const Bits& b) {
    Bits r;
    for (std::size_t k = 0; k < W; ++k) r.words[k] = a.words[k] & b.words[k];
    return r;
  }
};

using Slack = std::vector<Integer>;

void make_primitive(Slack& v) {
  Integer g = 0;
  for (const auto& x : v) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g == 1) return;
  }
  if (g > 1) {
    for (auto& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  }
}

/// Rows of H = [U | w_tilde]; the reduced inequalities read H (tau, 1) >= 0.
RationalMatrix homogenized_rows(const OptimalPolytope& poly) {
  RationalMatrix h(poly.d, poly.t + 1);
  for (std::size_t i = 0; i < poly.d; ++i) {
    for (std::size_t j = 0; j < poly.t; ++j) h(i, j) = poly.u(i, j);
    h(i, poly.t) = poly.w_tilde[i];
  }
  return h;
}

template <std::size_t W>
VertexList run_double_description(const OptimalPolytope& poly, const std::vector<std::size_t>& order,
                                  const EnumOptions& options) {
  const std::size_t d = poly.d;
  const std::size_t n = poly.t + 1;
  const RationalMatrix h = homogenized_rows(poly);

  // Greedy initial basis of n independent rows taken in insertion order.
  std::vector<std::size_t> basis;
  std::vector<std::size_t> rest;
  for (std::size_t idx : order) {
    if (basis.size() < n) {
      basis.push_back(idx);
      if (rank(h.select_rows(basis)) < basis.size()) {
        basis.pop_back();
        rest.push_back(idx);
      }
    } else {
      rest.push_back(idx);
    }
  }
  if (basis.size() < n) throw Error("reduced system is not full-dimensional");
  // Rows skipped while building the basis keep their relative insertion order.
  {
    std::vector<std::size_t> pos(d);
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    std::stable_sort(rest.begin(), rest.end(), [&](std::size_t a, std::size_t b) { return pos[a] < pos[b]; });
  }

  std::vector<Bits<W>> zeros;
  std::vector<Slack> slack;
  {
    const RationalMatrix inv = inverse(h.select_rows(basis));
    for (std::size_t j = 0; j < n; ++j) {
      const RationalVector x = inv.col(j);
      const RationalVector sv = primitive_integer(h * x);
      Slack s(d);
      for (std::size_t i = 0; i < d; ++i) s[i] = sv[i].get_num();
      Bits<W> z;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != j) z.set(basis[k]);
      }
      zeros.push_back(z);
      slack.push_back(std::move(s));
    }
  }

  const unsigned threads = resolve_threads(options.threads);
  const int min_tight = static_cast<int>(n) - 2;
  EnumStats stats;
  stats.max_rays = slack.size();

  for (std::size_t row : rest) {
    std::vector<std::size_t> pos, neg, zer;
    for (std::size_t r = 0; r < slack.size(); ++r) {
      const int sg = sgn(slack[r][row]);
      (sg > 0 ? pos : sg < 0 ? neg : zer).push_back(r);
    }

    // Adjacent (pos, neg) pairs, found in parallel over chunks of pos.
    const std::size_t nthreads = std::max<std::size_t>(1, std::min<std::size_t>(threads, pos.size()));
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> found(nthreads);
    std::vector<std::size_t> candidates(nthreads, 0);
    auto worker = [&](std::size_t tid) {
      const std::size_t lo = pos.size() * tid / nthreads;
      const std::size_t hi = pos.size() * (tid + 1) / nthreads;
      for (std::size_t a = lo; a < hi; ++a) {
        const std::size_t rp = pos[a];
        for (std::size_t rn : neg) {
          const Bits<W> common = zeros[rp] & zeros[rn];
          if (common.count() < min_tight) continue;
          ++candidates[tid];
          bool adjacent = true;
          for (std::size_t r = 0; r < zeros.size(); ++r) {
            if (r != rp && r != rn && common.subset_of(zeros[r])) {
              adjacent = false;
              break;
            }
          }
          if (adjacent) found[tid].emplace_back(rp, rn);
        }
      }
    };
    if (nthreads == 1) {
      worker(0);
    } else {
      std::vector<std::thread> pool;
      for (std::size_t tid = 0; tid < nthreads; ++tid) pool.emplace_back(worker, tid);
      for (auto& th : pool) th.join();
    }

    std::vector<Bits<W>> next_zeros;
    std::vector<Slack> next_slack;
    std::size_t new_count = 0;
    for (const auto& f : found) new_count += f.size();
    const std::size_t total = pos.size() + zer.size() + new_count;
    if (total > options.ray_cap) {
      throw ResourceLimit("intermediate ray count " + std::to_string(total) + " exceeds cap " +
                          std::to_string(options.ray_cap) + "; vertex list would be incomplete");
    }
    // New rays are formed before the surviving rays are moved out.
    std::vector<Bits<W>> new_zeros;
    std::vector<Slack> new_slack;
    new_zeros.reserve(new_count);
    new_slack.reserve(new_count);
    for (std::size_t tid = 0; tid < nthreads; ++tid) {
      stats.pair_candidates += candidates[tid];
      stats.adjacent_pairs += found[tid].size();
      for (const auto& [rp, rn] : found[tid]) {
        // Both coefficients are positive: alpha = s_p[row] > 0, beta = -s_n[row] > 0.
        const Integer alpha = slack[rp][row];
        const Integer beta = -slack[rn][row];
        Slack s(d);
        for (std::size_t i = 0; i < d; ++i) s[i] = alpha * slack[rn][i] + beta * slack[rp][i];
        make_primitive(s);
        Bits<W> z = zeros[rp] & zeros[rn];
        z.set(row);
        new_zeros.push_back(z);
        new_slack.push_back(std::move(s));
      }
    }
    next_zeros.reserve(total);
    next_slack.reserve(total);
    for (std::size_t r : pos) {
      next_zeros.push_back(zeros[r]);
      next_slack.push_back(std::move(slack[r]));
    }
    for (std::size_t r : zer) {
      Bits<W> z = zeros[r];
      z.set(row);
      next_zeros.push_back(z);
      next_slack.push_back(std::move(slack[r]));
    }
    for (std::size_t i = 0; i < new_count; ++i) {
      next_zeros.push_back(new_zeros[i]);
      next_slack.push_back(std::move(new_slack[i]));
    }
    zeros = std::move(next_zeros);
    slack = std::move(next_slack);
    stats.max_rays = std::max(stats.max_rays, slack.size());
  }

  VertexList out;
  out.vertices.reserve(slack.size());
  for (const auto& s : slack) {
    Integer total = 0;
    for (const auto& x : s) total += x;
    if (total <= 0) throw Error("double description produced a ray outside the polytope cone");
    RationalVector w(d);
    for (std::size_t i = 0; i < d; ++i) {
      w[i] = Rational(s[i], total);
      w[i].canonicalize();
    }
    out.vertices.push_back(std::move(w));
  }
  canonicalize(out);
  if (options.stats) *options.stats = stats;
  return out;
}

}  // namespace

std::vector<std::size_t> default_insertion_order(const OptimalPolytope& poly) {
  std::vector<std::size_t> order(poly.d);
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::size_t> zero_count(poly.d, 0);
  for (std::size_t i = 0; i < poly.d; ++i) {
    for (std::size_t j = 0; j < poly.t; ++j) zero_count[i] += sgn(poly.u(i, j)) == 0;
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (zero_count[a] != zero_count[b]) return zero_count[a] < zero_count[b];
    return lex_compare(poly.u.row(a), poly.u.row(b)) < 0;
  });
  return order;
}

VertexList enumerate_vertices(const OptimalPolytope& polytope, const EnumOptions& options) {
  if (polytope.t == 0) return VertexList{{polytope.w_tilde}};

  std::vector<std::size_t> order = options.insertion_order ? *options.insertion_order
                                                           : default_insertion_order(polytope);
  {
    std::vector<std::size_t> check = order;
    std::sort(check.begin(), check.end());
    for (std::size_t i = 0; i < check.size(); ++i) {
      if (check.size() != polytope.d || check[i] != i) {
        throw InvalidArgument("insertion order must be a permutation of the inequality indices");
      }
    }
  }

  const std::size_t words = (polytope.d + 63) / 64;
  if (words <= 1) return run_double_description<1>(polytope, order, options);
  if (words <= 2) return run_double_description<2>(polytope, order, options);
  if (words <= 4) return run_double_description<4>(polytope, order, options);
  if (words <= 8) return run_double_description<8>(polytope, order, options);
  throw ResourceLimit("double description supports at most 512 support points");
}

namespace {

/// Solves the square system [m | rhs] by fraction-free elimination.
/// Returns std::nullopt when singular or when some component is negative.
std::optional<RationalVector> solve_nonnegative(std::vector<std::vector<Integer>> m) {
  const std::size_t n = m.size();
  Integer prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && m[p][k] == 0) ++p;
    if (p == n) return std::nullopt;
    if (p != k) std::swap(m[p], m[k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j <= n; ++j) {
        m[i][j] = m[k][k] * m[i][j] - m[i][k] * m[k][j];
        mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  RationalVector x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    Rational acc(m[ii][n]);
    for (std::size_t j = ii + 1; j < n; ++j) acc -= Rational(m[ii][j]) * x[j];
    x[ii] = acc / Rational(m[ii][ii]);
    if (sgn(x[ii]) < 0) return std::nullopt;
  }
  return x;
}

}  // namespace

VertexList oracle_enumerate(const OptimalPolytope& polytope, const OracleOptions& options) {
  const std::size_t d = polytope.d;
  const std::size_t s = polytope.s;
  const Integer subsets = binomial(d, s);
  if (subsets > options.subset_cap) {
    throw ResourceLimit("C(d, s) = " + subsets.get_str() + " exceeds oracle cap " +
                        std::to_string(options.subset_cap));
  }

  // Independent rows of A, scaled to integers together with b.
  const auto rows = rref(polytope.a.transpose()).pivots;
  std::vector<std::vector<Integer>> ab(rows.size(), std::vector<Integer>(d + 1));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    RationalVector row(polytope.a.row(rows[r]).begin(), polytope.a.row(rows[r]).end());
    row.push_back(polytope.b[rows[r]]);
    const Integer l = denominator_lcm(row);
    for (std::size_t j = 0; j <= d; ++j) ab[r][j] = Rational(row[j] * l).get_num();
  }

  const unsigned threads = std::max(1U, resolve_threads(options.threads));
  std::vector<std::set<RationalVector, LexLess>> found(threads);
  auto worker = [&](unsigned tid) {
    std::vector<std::size_t> comb(s);
    std::iota(comb.begin(), comb.end(), 0);
    std::size_t counter = 0;
    while (true) {
      if (counter++ % threads == tid) {
        std::vector<std::vector<Integer>> m(s, std::vector<Integer>(s + 1));
        for (std::size_t r = 0; r < s; ++r) {
          for (std::size_t c = 0; c < s; ++c) m[r][c] = ab[r][comb[c]];
          m[r][s] = ab[r][d];
        }
        if (auto x = solve_nonnegative(std::move(m))) {
          RationalVector w(d);
          for (std::size_t c = 0; c < s; ++c) w[comb[c]] = (*x)[c];
          found[tid].insert(std::move(w));
        }
      }
      // Next s-subset in lexicographic order.
      std::size_t i = s;
      while (i > 0 && comb[i - 1] == d - s + i - 1) --i;
      if (i == 0) break;
      ++comb[i - 1];
      for (std::size_t j = i; j < s; ++j) comb[j] = comb[j - 1] + 1;
    }
  };
  if (s == 0) return VertexList{};
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned tid = 0; tid < threads; ++tid) pool.emplace_back(worker, tid);
    for (auto& th : pool) th.join();
  }

  VertexList out;
  for (auto& set : found) out.vertices.insert(out.vertices.end(), set.begin(), set.end());
  canonicalize(out);
  return out;
}

}  // namespace vod
