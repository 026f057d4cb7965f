#include "vod/design.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "text_util.hpp"
#include "vod/error.hpp"

namespace vod {

void DesignProblem::validate() const {
  if (p > 0) throw InvalidArgument("criterion exponent must be an integer <= 0, got " + std::to_string(p));
  if (points.size() != regressors.size()) throw InvalidArgument("points and regressors differ in count");
  if (support_size == 0 || support_size > points.size()) throw InvalidArgument("bad support size");
  for (const auto& x : points) {
    if (x.size() != k) throw InvalidArgument("candidate point with wrong number of factors");
  }
  for (const auto& f : regressors) {
    if (f.size() != m) throw InvalidArgument("regressor with wrong number of parameters");
  }
  if (support_size < m) throw InvalidArgument("support smaller than the number of parameters");
}

std::vector<std::size_t> Design::support() const {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (sgn(weights[i]) != 0) s.push_back(i);
  }
  return s;
}

std::size_t Design::support_size() const {
  std::size_t n = 0;
  for (const auto& w : weights) n += sgn(w) != 0;
  return n;
}

Design make_design(RationalVector weights) {
  for (const auto& w : weights) {
    if (sgn(w) < 0) throw InvalidArgument("negative design weight " + to_string(w));
  }
  if (sum(weights) != 1) throw InvalidArgument("design weights sum to " + to_string(sum(weights)));
  return Design{std::move(weights)};
}

Design uniform_design(std::size_t d) {
  return Design{RationalVector(d, Rational(1, d))};
}

InformationMatrix information_matrix(const DesignProblem& problem, std::span<const Rational> weights) {
  if (weights.size() != problem.d()) {
    throw DimensionMismatch("design of length " + std::to_string(weights.size()) + " for support of size " +
                            std::to_string(problem.d()));
  }
  const std::size_t m = problem.m;
  InformationMatrix info(m, m);
  Rational tmp;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (sgn(weights[i]) == 0) continue;
    const auto& f = problem.regressors[i];
    for (std::size_t r = 0; r < m; ++r) {
      if (sgn(f[r]) == 0) continue;
      tmp = weights[i] * f[r];
      for (std::size_t c = r; c < m; ++c) {
        if (sgn(f[c]) != 0) info(r, c) += tmp * f[c];
      }
    }
  }
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < r; ++c) info(r, c) = info(c, r);
  }
  return info;
}

InformationMatrix information_matrix(const DesignProblem& problem, const Design& design) {
  return information_matrix(problem, design.weights);
}

CriterionValue criterion_value(int p, const InformationMatrix& m) {
  if (p > 0) throw InvalidArgument("criterion exponent must be <= 0");
  CriterionValue out;
  const Rational det = determinant(m);
  if (sgn(det) == 0) {
    out.singular = true;
    out.core = 0;
    out.value = 0.0;
    return out;
  }
  const double mm = static_cast<double>(m.rows());
  if (p == 0) {
    out.core = det;
    out.value = std::pow(det.get_d(), 1.0 / mm);
  } else {
    out.core = matrix_power(m, p).trace();
    out.value = std::pow(out.core.get_d() / mm, 1.0 / static_cast<double>(p));
  }
  return out;
}

Verdict verify_maximal_optimal(const DesignProblem& problem, const Design& design) {
  const InformationMatrix info = information_matrix(problem, design);
  if (sgn(determinant(info)) == 0) throw SingularMatrix("information matrix of the design is singular");

  const RationalMatrix kernel = matrix_power(info, problem.p - 1);
  Verdict v;
  v.threshold = problem.p == 0 ? Rational(problem.m) : matrix_power(info, problem.p).trace();
  v.variance.reserve(problem.candidate_count());
  v.passed = true;
  for (std::size_t i = 0; i < problem.candidate_count(); ++i) {
    Rational var = quadratic_form(kernel, problem.regressors[i]);
    const bool in_support = i < problem.d() && sgn(design.weights[i]) > 0;
    const int c = cmp(var, v.threshold);
    if (c == 0) {
      v.equality_set.push_back(i);
    } else if (c < 0) {
      v.strict_set.push_back(i);
    }
    if ((in_support && c != 0) || (!in_support && c >= 0)) {
      v.violations.push_back(i);
      v.passed = false;
    }
    v.variance.push_back(std::move(var));
  }
  return v;
}

NormalizationCheck normalization_identity_check(const DesignProblem& problem, std::span<const Rational> w,
                                                const InformationMatrix& m_star) {
  if (w.size() != problem.d()) return NormalizationCheck::kNotApplicable;
  for (const auto& x : w) {
    if (sgn(x) < 0) return NormalizationCheck::kNotApplicable;
  }
  const InformationMatrix info = information_matrix(problem, w);
  if (!(info == m_star)) return NormalizationCheck::kNotApplicable;

  const RationalMatrix kernel = matrix_power(m_star, problem.p - 1);
  const Rational lhs = problem.p == 0 ? Rational(problem.m) : matrix_power(m_star, problem.p).trace();
  const Rational middle = (info * kernel).trace();
  Rational weighted = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (sgn(w[i]) != 0) weighted += w[i] * quadratic_form(kernel, problem.regressors[i]);
  }
  const Rational mass = sum(w);
  if (lhs != middle || middle != weighted || sgn(lhs) <= 0) return NormalizationCheck::kFails;
  if (weighted != lhs * mass || mass != 1) return NormalizationCheck::kFails;
  return NormalizationCheck::kHolds;
}

void write_design_table(std::ostream& out, const DesignProblem& problem, const Design& design) {
  const auto supp = design.support();
  for (std::size_t r = 0; r < problem.k; ++r) {
    for (std::size_t j = 0; j < supp.size(); ++j) {
      if (j) out << ',';
      out << to_string(problem.points[supp[j]][r]);
    }
    out << '\n';
  }
  for (std::size_t j = 0; j < supp.size(); ++j) {
    if (j) out << ',';
    out << to_string(design.weights[supp[j]]);
  }
  out << '\n';
}

DesignTable read_design_table(std::istream& in) {
  std::vector<RationalVector> rows;
  std::string line;
  while (std::getline(in, line)) {
    line = detail::strip_comment(line);
    if (detail::trim(line).empty()) continue;
    RationalVector row;
    for (const auto& cell : detail::split(line, ',')) row.push_back(parse_rational(cell));
    if (!rows.empty() && row.size() != rows.front().size()) throw ParseError("ragged design table");
    rows.push_back(std::move(row));
  }
  if (rows.size() < 2) throw ParseError("design table needs coordinate rows and a weight row");
  DesignTable table;
  table.weights = std::move(rows.back());
  rows.pop_back();
  const std::size_t n = table.weights.size();
  table.points.assign(n, RationalVector(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t j = 0; j < n; ++j) table.points[j][r] = rows[r][j];
  }
  return table;
}

Design design_from_table(const DesignProblem& problem, const DesignTable& table) {
  RationalVector w(problem.d());
  for (std::size_t j = 0; j < table.points.size(); ++j) {
    std::size_t idx = problem.d();
    for (std::size_t i = 0; i < problem.d(); ++i) {
      if (problem.points[i] == table.points[j]) {
        idx = i;
        break;
      }
    }
    if (idx == problem.d()) throw InvalidArgument("design point outside the maximum optimal support");
    w[idx] += table.weights[j];
  }
  return make_design(std::move(w));
}

}  // namespace vod
