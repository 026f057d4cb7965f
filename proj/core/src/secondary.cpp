#include "vod/secondary.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "vod/error.hpp"

namespace vod {

namespace {

constexpr std::size_t kPivotCap = 1'000'000;
constexpr int kBisectionSteps = 100;

std::vector<std::size_t> support_of(std::span<const Rational> w) {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (sgn(w[i]) != 0) s.push_back(i);
  }
  return s;
}

/// Moves a point of P_* along null directions of its support columns until
/// they are independent; the result is a vertex.
RationalVector purify(const OptimalPolytope& poly, RationalVector x) {
  while (true) {
    const auto supp = support_of(x);
    const RationalMatrix null = nullspace_basis(poly.a.select_columns(supp));
    if (null.cols() == 0) return x;
    RationalVector z = null.col(0);
    if (std::none_of(z.begin(), z.end(), [](const Rational& v) { return sgn(v) < 0; })) {
      for (auto& v : z) v = -v;
    }
    std::optional<Rational> theta;
    for (std::size_t j = 0; j < supp.size(); ++j) {
      if (sgn(z[j]) < 0) {
        Rational r = x[supp[j]] / -z[j];
        if (!theta || r < *theta) theta = r;
      }
    }
    for (std::size_t j = 0; j < supp.size(); ++j) x[supp[j]] += *theta * z[j];
  }
}

/// Extends a list of independent columns (or rows) of m to `target` of them,
/// scanning candidates in index order.
std::vector<std::size_t> complete_basis(const RationalMatrix& m, std::vector<std::size_t> chosen,
                                        const std::vector<std::size_t>& candidates, std::size_t target,
                                        bool by_rows) {
  auto pick = [&](const std::vector<std::size_t>& idx) {
    return by_rows ? m.select_rows(idx) : m.select_columns(idx);
  };
  for (auto c : candidates) {
    if (chosen.size() == target) break;
    if (std::find(chosen.begin(), chosen.end(), c) != chosen.end()) continue;
    chosen.push_back(c);
    if (rank(pick(chosen)) != chosen.size()) chosen.pop_back();
  }
  if (chosen.size() != target) throw Error("could not complete a simplex basis");
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

RationalVector unit(std::size_t n, std::size_t i) {
  RationalVector e(n);
  e[i] = 1;
  return e;
}

/// Revised simplex with Bland's rule on min c'w, R w = rb, w >= 0, where
/// R holds s independent rows equivalent to A w = b. The basis is kept
/// between calls.
class AmbientSimplex {
 public:
  explicit AmbientSimplex(const OptimalPolytope& poly) : poly_(poly) {
    RationalMatrix aug(poly.q, poly.d + 1);
    for (std::size_t i = 0; i < poly.q; ++i) {
      for (std::size_t j = 0; j < poly.d; ++j) aug(i, j) = poly.a(i, j);
      aug(i, poly.d) = poly.b[i];
    }
    const auto red = rref(aug).reduced;
    r_ = RationalMatrix(poly.s, poly.d);
    rb_.resize(poly.s);
    for (std::size_t i = 0; i < poly.s; ++i) {
      for (std::size_t j = 0; j < poly.d; ++j) r_(i, j) = red(i, j);
      rb_[i] = red(i, poly.d);
    }
    const RationalVector v = purify(poly, poly.w_tilde);
    std::vector<std::size_t> all(poly.d);
    for (std::size_t j = 0; j < poly.d; ++j) all[j] = j;
    basis_ = complete_basis(r_, support_of(v), all, poly.s, false);
  }

  RationalVector solve(std::span<const Rational> c) {
    const std::size_t s = poly_.s;
    for (std::size_t pivots = 0; pivots < kPivotCap; ++pivots) {
      const RationalMatrix b = r_.select_columns(basis_);
      const RationalVector xb = vod::solve(b, rb_).x;
      RationalVector cb(s);
      for (std::size_t i = 0; i < s; ++i) cb[i] = c[basis_[i]];
      const RationalVector y = vod::solve(b.transpose(), cb).x;

      std::optional<std::size_t> entering;
      for (std::size_t j = 0; j < poly_.d && !entering; ++j) {
        if (std::binary_search(basis_.begin(), basis_.end(), j)) continue;
        if (c[j] - dot(y, r_.col(j)) < 0) entering = j;
      }
      if (!entering) {
        RationalVector w(poly_.d);
        for (std::size_t i = 0; i < s; ++i) w[basis_[i]] = xb[i];
        return w;
      }
      const RationalVector u = vod::solve(b, r_.col(*entering)).x;
      std::optional<std::size_t> leave;
      Rational best;
      for (std::size_t i = 0; i < s; ++i) {
        if (sgn(u[i]) <= 0) continue;
        const Rational ratio = xb[i] / u[i];
        if (!leave || ratio < best) {
          leave = i;
          best = ratio;
        }
      }
      if (!leave) throw Error("linear subproblem is unbounded");
      basis_[*leave] = *entering;
      std::sort(basis_.begin(), basis_.end());
    }
    throw Error("simplex pivot cap reached");
  }

 private:
  const OptimalPolytope& poly_;
  RationalMatrix r_;
  RationalVector rb_;
  std::vector<std::size_t> basis_;
};

/// Simplex on the inequality form min c~'tau, U tau >= -w_tilde. A basis is
/// a set of t independent tight rows; Bland's rule on row indices.
class ReducedSimplex {
 public:
  explicit ReducedSimplex(const OptimalPolytope& poly) : poly_(poly), sys_{poly.u, poly.w_tilde} {
    const RationalVector v = purify(poly, poly.w_tilde);
    tau_ = sys_.coordinates(v);
    std::vector<std::size_t> zeros;
    for (std::size_t i = 0; i < poly.d; ++i) {
      if (sgn(v[i]) == 0) zeros.push_back(i);
    }
    basis_ = complete_basis(poly.u, {}, zeros, poly.t, true);
  }

  RationalVector solve(std::span<const Rational> c) {
    const std::size_t t = poly_.t;
    const RationalVector ct = poly_.u.transpose() * c;
    for (std::size_t pivots = 0; pivots < kPivotCap; ++pivots) {
      const RationalMatrix ub = poly_.u.select_rows(basis_);
      const RationalVector lambda = vod::solve(ub.transpose(), ct).x;
      std::optional<std::size_t> pos;
      for (std::size_t i = 0; i < t && !pos; ++i) {
        if (sgn(lambda[i]) < 0) pos = i;
      }
      if (!pos) return sys_.lift(tau_);

      const RationalVector delta = vod::solve(ub, unit(t, *pos)).x;
      std::optional<std::size_t> entering;
      Rational best;
      for (std::size_t i = 0; i < poly_.d; ++i) {
        if (std::binary_search(basis_.begin(), basis_.end(), i)) continue;
        const Rational rate = dot(poly_.u.row(i), delta);
        if (sgn(rate) >= 0) continue;
        const Rational slack = dot(poly_.u.row(i), tau_) + poly_.w_tilde[i];
        const Rational step = slack / -rate;
        if (!entering || step < best) {
          entering = i;
          best = step;
        }
      }
      if (!entering) throw Error("linear subproblem is unbounded");
      for (std::size_t j = 0; j < t; ++j) tau_[j] += best * delta[j];
      basis_[*pos] = *entering;
      std::sort(basis_.begin(), basis_.end());
    }
    throw Error("simplex pivot cap reached");
  }

 private:
  const OptimalPolytope& poly_;
  ReducedSystem sys_;
  RationalVector tau_;
  std::vector<std::size_t> basis_;
};

class Entropy final : public Objective {
 public:
  std::string name() const override { return "entropy"; }
  Sense sense() const override { return Sense::kMaximizeConcave; }
  double value(std::span<const double> w) const override {
    double h = 0.0;
    for (double x : w) {
      if (x > 0) h -= x * std::log(x);
    }
    return h;
  }
  void gradient(std::span<const double> w, std::span<double> g) const override {
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] <= 0) throw Nondifferentiable("entropy at a zero weight");
      g[i] = -std::log(w[i]) - 1.0;
    }
  }
};

class Norm final : public Objective {
 public:
  Norm(double p, bool powered) : p_(p), powered_(powered) {
    if (!(p >= 1.0)) throw InvalidArgument("norm exponent must be at least 1");
  }
  std::string name() const override {
    if (std::isinf(p_)) return "max-norm";
    return (powered_ ? "powered-norm-" : "norm-") + std::to_string(p_);
  }
  Sense sense() const override { return Sense::kMinimizeConvex; }
  double value(std::span<const double> w) const override {
    if (std::isinf(p_)) {
      double m = 0.0;
      for (double x : w) m = std::max(m, std::abs(x));
      return m;
    }
    double s = 0.0;
    for (double x : w) s += std::pow(std::abs(x), p_);
    return powered_ ? s : std::pow(s, 1.0 / p_);
  }
  void gradient(std::span<const double> w, std::span<double> g) const override {
    if (std::isinf(p_)) throw Nondifferentiable("max norm");
    const double scale = powered_ ? p_ : std::pow(value(w), 1.0 - p_);
    if (!std::isfinite(scale)) throw Nondifferentiable("norm at the origin");
    for (std::size_t i = 0; i < w.size(); ++i) {
      g[i] = scale * std::copysign(std::pow(std::abs(w[i]), p_ - 1.0), w[i]);
    }
  }

 private:
  double p_;
  bool powered_;
};

class Linear final : public Objective {
 public:
  explicit Linear(const RationalVector& c) : c_(to_doubles(c)) {}
  std::string name() const override { return "linear"; }
  Sense sense() const override { return Sense::kMinimizeConvex; }
  double value(std::span<const double> w) const override {
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s += c_.at(i) * w[i];
    return s;
  }
  void gradient(std::span<const double> w, std::span<double> g) const override {
    for (std::size_t i = 0; i < w.size(); ++i) g[i] = c_.at(i);
  }

 private:
  std::vector<double> c_;
};

class HeteroskedasticD final : public Objective {
 public:
  HeteroskedasticD(const DesignProblem& problem, const RationalVector& r) : m_(problem.m) {
    if (r.size() != problem.d()) throw DimensionMismatch("r has length " + std::to_string(r.size()));
    for (const auto& x : r) {
      if (sgn(x) <= 0) throw InvalidArgument("heteroskedasticity coefficients must be positive");
    }
    r_ = to_doubles(r);
    for (std::size_t i = 0; i < problem.d(); ++i) {
      Eigen::VectorXd f(m_);
      for (std::size_t a = 0; a < m_; ++a) f[a] = to_double(problem.regressors[i][a]);
      f_.push_back(std::move(f));
    }
  }
  std::string name() const override { return "heteroskedastic-phi0"; }
  Sense sense() const override { return Sense::kMaximizeConcave; }

  double value(std::span<const double> w) const override {
    Eigen::LLT<Eigen::MatrixXd> llt(moment(w));
    if (llt.info() != Eigen::Success) return 0.0;
    return phi(llt);
  }

  void gradient(std::span<const double> w, std::span<double> g) const override {
    Eigen::LLT<Eigen::MatrixXd> llt(moment(w));
    if (llt.info() != Eigen::Success) throw Nondifferentiable("singular information matrix");
    const double scale = phi(llt) / static_cast<double>(m_);
    for (std::size_t i = 0; i < f_.size(); ++i) g[i] = scale * r_[i] * f_[i].dot(llt.solve(f_[i]));
  }

 private:
  Eigen::MatrixXd moment(std::span<const double> w) const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(m_, m_);
    for (std::size_t i = 0; i < f_.size(); ++i) m.noalias() += (r_[i] * w[i]) * f_[i] * f_[i].transpose();
    return m;
  }
  double phi(const Eigen::LLT<Eigen::MatrixXd>& llt) const {
    const Eigen::MatrixXd l = llt.matrixL();
    return std::exp(2.0 * l.diagonal().array().log().sum() / static_cast<double>(m_));
  }

  std::size_t m_;
  std::vector<double> r_;
  std::vector<Eigen::VectorXd> f_;
};

class Negated final : public Objective {
 public:
  explicit Negated(std::unique_ptr<Objective> inner) : inner_(std::move(inner)) {}
  std::string name() const override { return "negated-" + inner_->name(); }
  Sense sense() const override {
    return inner_->sense() == Sense::kMaximizeConcave ? Sense::kMinimizeConvex : Sense::kMaximizeConcave;
  }
  double value(std::span<const double> w) const override { return -inner_->value(w); }
  void gradient(std::span<const double> w, std::span<double> g) const override {
    inner_->gradient(w, g);
    for (auto& x : g) x = -x;
  }

 private:
  std::unique_ptr<Objective> inner_;
};

double fdot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

struct Atom {
  RationalVector exact;
  std::vector<double> w;
  double coef = 0.0;
};

}  // namespace

std::string_view parametrization_name(Parametrization p) {
  switch (p) {
    case Parametrization::kAmbient: return "ambient";
    case Parametrization::kReduced: return "reduced";
    case Parametrization::kVertex: return "vertex";
  }
  return "";
}

Parametrization parse_parametrization(std::string_view name) {
  if (name == "ambient") return Parametrization::kAmbient;
  if (name == "reduced") return Parametrization::kReduced;
  if (name == "vertex") return Parametrization::kVertex;
  throw InvalidArgument("unknown parametrization '" + std::string(name) + "'");
}

std::unique_ptr<Objective> entropy_objective() { return std::make_unique<Entropy>(); }

std::unique_ptr<Objective> norm_objective(double p, bool powered) { return std::make_unique<Norm>(p, powered); }

std::unique_ptr<Objective> linear_objective(const RationalVector& cost) { return std::make_unique<Linear>(cost); }

std::unique_ptr<Objective> heteroskedastic_d_objective(const DesignProblem& problem, const RationalVector& r) {
  return std::make_unique<HeteroskedasticD>(problem, r);
}

std::unique_ptr<Objective> negated(std::unique_ptr<Objective> inner) {
  return std::make_unique<Negated>(std::move(inner));
}

RationalVector lp_minimize(const OptimalPolytope& polytope, std::span<const Rational> cost, Parametrization form) {
  if (cost.size() != polytope.d) throw DimensionMismatch("cost vector length differs from d");
  if (polytope.t == 0) return polytope.w_tilde;
  switch (form) {
    case Parametrization::kAmbient: return AmbientSimplex(polytope).solve(cost);
    case Parametrization::kReduced: return ReducedSimplex(polytope).solve(cost);
    case Parametrization::kVertex: break;
  }
  throw InvalidArgument("lp_minimize needs the ambient or reduced form");
}

SecondaryResult optimize(const VodCatalog& catalog, const Objective& objective, const OptimizeConfig& config) {
  const OptimalPolytope& poly = catalog.polytope;
  const std::size_t d = poly.d;
  SecondaryResult res;
  res.parametrization = config.parametrization.value_or(
      catalog.ell() > 0 && catalog.ell() <= 10'000 ? Parametrization::kVertex : Parametrization::kReduced);
  const bool vertex_form = res.parametrization == Parametrization::kVertex;
  if (vertex_form && catalog.ell() == 0) throw InvalidArgument("vertex parametrization needs the vertex list");
  if (config.start && (config.start->size() != d || !membership(poly, *config.start))) {
    throw InvalidArgument("infeasible start: the point is not in P_*");
  }
  const double sign = objective.sense() == Sense::kMaximizeConcave ? -1.0 : 1.0;

  std::vector<Atom> atoms;
  std::map<RationalVector, std::size_t, LexLess> atom_index;
  auto add_atom = [&](const RationalVector& p) {
    auto [it, inserted] = atom_index.try_emplace(p, atoms.size());
    if (inserted) atoms.push_back({p, to_doubles(p), 0.0});
    return it->second;
  };

  if (vertex_form) {
    for (const auto& v : catalog.vertices.vertices) add_atom(v);
    if (config.start) {
      for (const auto& term : caratheodory_decompose(catalog, *config.start)) {
        atoms[term.vertex].coef = to_double(term.coefficient);
      }
    } else {
      for (auto& a : atoms) a.coef = 1.0 / static_cast<double>(atoms.size());
    }
  } else {
    atoms[add_atom(config.start.value_or(poly.w_tilde))].coef = 1.0;
  }

  std::optional<AmbientSimplex> ambient;
  std::optional<ReducedSimplex> reduced;
  if (poly.t > 0 && res.parametrization == Parametrization::kAmbient) ambient.emplace(poly);
  if (poly.t > 0 && res.parametrization == Parametrization::kReduced) reduced.emplace(poly);

  std::vector<double> x(d), g(d), y(d), dir(d), gy(d);
  auto recompute = [&] {
    std::fill(x.begin(), x.end(), 0.0);
    for (const auto& a : atoms) {
      if (a.coef == 0.0) continue;
      for (std::size_t i = 0; i < d; ++i) x[i] += a.coef * a.w[i];
    }
  };
  auto grad = [&](std::span<const double> at, std::span<double> out) {
    objective.gradient(at, out);
    for (auto& v : out) v *= sign;
  };
  auto slope = [&](double gamma) {
    for (std::size_t i = 0; i < d; ++i) y[i] = x[i] + gamma * dir[i];
    try {
      grad(y, gy);
    } catch (const Nondifferentiable&) {
      return std::numeric_limits<double>::infinity();
    }
    return fdot(gy, dir);
  };

  recompute();
  for (res.iterations = 0; res.iterations < config.max_iter; ++res.iterations) {
    grad(x, g);
    std::size_t s_idx = 0;
    if (vertex_form) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < catalog.ell(); ++j) {
        const double v = fdot(g, atoms[j].w);
        if (v < best) {
          best = v;
          s_idx = j;
        }
      }
    } else if (poly.t == 0) {
      s_idx = 0;
    } else {
      RationalVector cost(d);
      for (std::size_t i = 0; i < d; ++i) cost[i] = from_double(g[i]);
      s_idx = add_atom(ambient ? ambient->solve(cost) : reduced->solve(cost));
    }
    const double gx = fdot(g, x);
    res.gap = gx - fdot(g, atoms[s_idx].w);
    if (res.gap <= config.tol) break;

    std::optional<std::size_t> a_idx;
    double away_val = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < atoms.size(); ++j) {
      if (atoms[j].coef <= 0.0) continue;
      const double v = fdot(g, atoms[j].w);
      if (v > away_val) {
        away_val = v;
        a_idx = j;
      }
    }
    const bool away = a_idx && away_val - gx > res.gap && atoms[*a_idx].coef < 1.0;
    double gamma_max = 1.0;
    if (away) {
      const double c = atoms[*a_idx].coef;
      gamma_max = c / (1.0 - c);
      for (std::size_t i = 0; i < d; ++i) dir[i] = x[i] - atoms[*a_idx].w[i];
    } else {
      for (std::size_t i = 0; i < d; ++i) dir[i] = atoms[s_idx].w[i] - x[i];
    }

    double gamma = gamma_max;
    if (slope(gamma_max) > 0.0) {
      double lo = 0.0, hi = gamma_max;
      for (int it = 0; it < kBisectionSteps; ++it) {
        const double mid = 0.5 * (lo + hi);
        (slope(mid) > 0.0 ? hi : lo) = mid;
      }
      gamma = lo;
    }

    if (away) {
      for (auto& a : atoms) a.coef *= 1.0 + gamma;
      atoms[*a_idx].coef -= gamma;
      if (gamma == gamma_max || atoms[*a_idx].coef < 0.0) atoms[*a_idx].coef = 0.0;
    } else {
      for (auto& a : atoms) a.coef *= 1.0 - gamma;
      atoms[s_idx].coef += gamma;
    }
    recompute();
  }
  res.converged = res.gap <= config.tol;
  res.weights = x;
  res.value = objective.value(x);

  switch (res.parametrization) {
    case Parametrization::kVertex:
      for (std::size_t j = 0; j < catalog.ell(); ++j) res.coordinates.push_back(atoms[j].coef);
      break;
    case Parametrization::kReduced: {
      res.coordinates.assign(poly.t, 0.0);
      const ReducedSystem sys{poly.u, poly.w_tilde};
      for (const auto& a : atoms) {
        if (a.coef == 0.0) continue;
        const auto tau = to_doubles(sys.coordinates(a.exact));
        for (std::size_t j = 0; j < poly.t; ++j) res.coordinates[j] += a.coef * tau[j];
      }
      break;
    }
    case Parametrization::kAmbient: res.coordinates = x; break;
  }
  for (const auto& a : atoms) {
    if (a.coef > 0.0) res.atoms.emplace_back(a.exact, a.coef);
  }
  return res;
}

RationalVector snap_to_polytope(const SecondaryResult& result) {
  if (result.atoms.empty()) throw InvalidArgument("result has no atoms");
  const std::size_t d = result.atoms.front().first.size();
  RationalVector w(d);
  Rational total = 0;
  for (const auto& [p, c] : result.atoms) {
    const Rational rc = from_double(c);
    total += rc;
    for (std::size_t i = 0; i < d; ++i) w[i] += rc * p[i];
  }
  for (auto& x : w) x /= total;
  return w;
}

ScanResult extremal_concave_scan(const VodCatalog& catalog, const Objective& objective) {
  if (objective.sense() != Sense::kMaximizeConcave) throw InvalidArgument("the scan needs a concave criterion");
  ScanResult res;
  std::vector<double> vals;
  for (const auto& v : catalog.vertices.vertices) vals.push_back(objective.value(to_doubles(v)));
  if (vals.empty()) return res;
  res.value = *std::min_element(vals.begin(), vals.end());
  const double tol = 1e-12 * std::max(1.0, std::abs(res.value));
  for (std::size_t j = 0; j < vals.size(); ++j) {
    if (vals[j] <= res.value + tol) res.minimizers.push_back(j);
  }
  return res;
}

}  // namespace vod
