#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vod/analysis.hpp"

namespace vod {

enum class Sense { kMaximizeConcave, kMinimizeConvex };

/// Where the linear subproblems of Frank-Wolfe are solved and in which
/// coordinates the optimum is reported.
///   kAmbient  w in R^d, exact simplex on {w >= 0 : A w = b}
///   kReduced  tau in R^t, exact simplex on {U tau >= -w_tilde}
///   kVertex   a in the unit simplex over the vertex list
enum class Parametrization { kAmbient, kReduced, kVertex };

std::string_view parametrization_name(Parametrization p);
Parametrization parse_parametrization(std::string_view name);

/// A secondary criterion of the weights of an optimal design.
class Objective {
 public:
  virtual ~Objective() = default;
  virtual std::string name() const = 0;
  virtual Sense sense() const = 0;
  virtual double value(std::span<const double> w) const = 0;
  /// Throws Nondifferentiable where the gradient does not exist.
  virtual void gradient(std::span<const double> w, std::span<double> g) const = 0;
};

/// Shannon entropy -sum w_i log w_i (concave).
std::unique_ptr<Objective> entropy_objective();

/// sum |w_i|^p when powered, else (sum |w_i|^p)^(1/p); p = infinity gives the
/// max norm. Convex for p >= 1.
std::unique_ptr<Objective> norm_objective(double p, bool powered);

/// c'w (treated as convex).
std::unique_ptr<Objective> linear_objective(const RationalVector& cost);

/// Phi_0(sum_i r_i w_i f_i f_i') for a heteroskedastic model (concave).
std::unique_ptr<Objective> heteroskedastic_d_objective(const DesignProblem& problem, const RationalVector& r);

/// -Psi with the opposite sense.
std::unique_ptr<Objective> negated(std::unique_ptr<Objective> inner);

struct OptimizeConfig {
  std::size_t max_iter = 100000;
  double tol = 1e-8;
  /// Defaults to kVertex when ell <= 10^4, else kReduced.
  std::optional<Parametrization> parametrization;
  /// Exact feasible start. Defaults to the barycenter (vertex form) or w_tilde.
  std::optional<RationalVector> start;
};

struct SecondaryResult {
  Parametrization parametrization = Parametrization::kVertex;
  std::vector<double> weights;
  std::vector<double> coordinates;  ///< a, tau or w depending on the parametrization
  double value = 0.0;               ///< Psi at the returned weights
  double gap = 0.0;                 ///< Frank-Wolfe duality gap
  std::size_t iterations = 0;
  bool converged = false;
  /// Exact points of P_* and their coefficients; weights = sum c_j p_j.
  std::vector<std::pair<RationalVector, double>> atoms;
};

/// Frank-Wolfe with away steps and exact linear subproblems. Throws
/// InvalidArgument for an infeasible start and Nondifferentiable when the
/// objective has no gradient at an iterate.
SecondaryResult optimize(const VodCatalog& catalog, const Objective& objective, const OptimizeConfig& config = {});

/// The atoms recombined with their coefficients rounded to rationals and
/// renormalized; an exact point of P_*.
RationalVector snap_to_polytope(const SecondaryResult& result);

/// Exact minimizer of c'w over P_* found by the simplex method in the given
/// form (kAmbient or kReduced); always a vertex.
RationalVector lp_minimize(const OptimalPolytope& polytope, std::span<const Rational> cost, Parametrization form);

struct ScanResult {
  double value = 0.0;
  std::vector<std::size_t> minimizers;
};

/// Minimum of a concave criterion over the vertices, where it is attained
/// over all of P_*. Values within 1e-12 (relative) count as ties.
ScanResult extremal_concave_scan(const VodCatalog& catalog, const Objective& objective);

}  // namespace vod
