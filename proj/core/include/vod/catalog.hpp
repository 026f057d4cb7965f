#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vod/design.hpp"

namespace vod {

/// Benchmark model families.
///   kSbw  first-degree model on [0,1]^k without constant term
///   kCbw  first-degree model on [-1,1]^k without constant term
///   kMem  first-degree model on [-1,1]^k
///   kInt  first-degree model on [-1,1]^k with two-factor interactions
///   kQwoi additive second-degree model on [-1,1]^k
enum class Family { kSbw, kCbw, kMem, kInt, kQwoi, kCustom };

std::string_view family_name(Family f);
Family parse_family(std::string_view name);

/// Permutation of the indices of Y: image[i] is where point i is sent.
using Permutation = std::vector<std::size_t>;

struct CatalogModel {
  Family family = Family::kCustom;
  std::size_t k = 0;
  int p = 0;
  DesignProblem problem;
  Design maximal_design;
  std::vector<Permutation> symmetry_generators;
  std::optional<Verdict> verdict;  ///< attached by load_problem
};

/// Throws InvalidArgument for unsupported family/k/p combinations.
CatalogModel build(Family family, std::size_t k, int p);

/// Regressor f(x) of a built-in family.
RationalVector regressor(Family family, std::span<const Rational> x);

struct SymmetryKinds {
  bool relabel = true;         ///< adjacent transpositions of factors
  bool sign_flip = false;      ///< negation of a single factor
  bool point_negation = false; ///< y <-> -y for one support point at a time
};

SymmetryKinds family_symmetries(Family family);

/// Generating permutations of Y for the requested operations. Operations
/// that do not map Y onto itself are rejected with InvalidArgument.
std::vector<Permutation> symmetry_generators(const DesignProblem& problem, SymmetryKinds kinds);
std::vector<Permutation> symmetry_generators(Family family, std::size_t k, int p = 0);

/// Applies a permutation of Y to a weight vector: out[g[i]] = w[i].
RationalVector permute_weights(const Permutation& g, std::span<const Rational> w);

/// Cycle notation with 1-based indices, e.g. "(1 2)(3 4)".
Permutation parse_cycles(std::string_view text, std::size_t n);
std::string format_cycles(const Permutation& g);

/// Loads a problem file and runs verify_maximal_optimal on the declared
/// maximal design. Throws ParseError on malformed input and
/// VerificationFailure when the declared design is not maximal optimal.
CatalogModel load_problem(const std::filesystem::path& path);
CatalogModel parse_problem(std::string_view text, std::string name = "custom");

/// Serializes a model in the problem-file format accepted by parse_problem.
std::string format_problem(const CatalogModel& model);

}  // namespace vod
