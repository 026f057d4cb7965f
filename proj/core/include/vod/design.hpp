#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "vod/matrix.hpp"
#include "vod/rational.hpp"

namespace vod {

/// A finite optimal-design problem. The first `support_size` candidates form
/// the maximum optimal support Y; the remaining candidates only take part in
/// verification of the equivalence conditions.
struct DesignProblem {
  std::string name;
  std::size_t k = 0;  ///< number of factors
  std::size_t m = 0;  ///< number of parameters
  int p = 0;          ///< criterion exponent, an integer <= 0
  std::size_t support_size = 0;
  std::vector<RationalVector> points;      ///< k coordinates per candidate
  std::vector<RationalVector> regressors;  ///< f(x), m entries per candidate

  std::size_t d() const noexcept { return support_size; }
  std::size_t candidate_count() const noexcept { return points.size(); }

  /// Throws InvalidArgument when shapes or the exponent are inconsistent.
  void validate() const;
};

using InformationMatrix = RationalMatrix;

/// Weights over the d points of Y. Nonnegative, summing to exactly one.
struct Design {
  RationalVector weights;

  std::vector<std::size_t> support() const;
  std::size_t support_size() const;
  friend bool operator==(const Design&, const Design&) = default;
};

/// Checks the simplex conditions; throws InvalidArgument otherwise.
Design make_design(RationalVector weights);

Design uniform_design(std::size_t d);

/// M = sum_i w_i f_i f_i' over the support points.
InformationMatrix information_matrix(const DesignProblem& problem, const Design& design);
InformationMatrix information_matrix(const DesignProblem& problem, std::span<const Rational> weights);

struct CriterionValue {
  bool singular = false;
  /// det(M) for p = 0, tr(M^p) for p < 0; zero when singular.
  Rational core;
  /// Phi_p(M); 0 when singular.
  double value = 0.0;
};

CriterionValue criterion_value(int p, const InformationMatrix& m);

struct Verdict {
  bool passed = false;
  Rational threshold;                ///< tr(M^p)
  std::vector<Rational> variance;    ///< f'(x) M^{p-1} f(x) per candidate
  std::vector<std::size_t> equality_set;
  std::vector<std::size_t> strict_set;
  std::vector<std::size_t> violations;
};

/// Exact equivalence-theorem check of a candidate maximal optimal design.
/// Throws SingularMatrix when M(design) is singular.
Verdict verify_maximal_optimal(const DesignProblem& problem, const Design& design);

enum class NormalizationCheck { kHolds, kFails, kNotApplicable };

/// For w >= 0 with M(zeta_w) = M_*, confirms tr(M_*^p) = tr(M(zeta_w) M_*^{p-1})
/// = tr(M_*^p) 1'w and hence 1'w = 1. kNotApplicable when w is negative
/// somewhere or misses the moment equations.
NormalizationCheck normalization_identity_check(const DesignProblem& problem, std::span<const Rational> w,
                                                const InformationMatrix& m_star);

/// Two-row table form: k coordinate rows and a final weight row, one column
/// per support point.
void write_design_table(std::ostream& out, const DesignProblem& problem, const Design& design);

struct DesignTable {
  std::vector<RationalVector> points;
  RationalVector weights;
};
DesignTable read_design_table(std::istream& in);

/// Maps a table onto Y. Throws InvalidArgument for points outside Y.
Design design_from_table(const DesignProblem& problem, const DesignTable& table);

}  // namespace vod
