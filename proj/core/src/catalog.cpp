#include "vod/catalog.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "text_util.hpp"
#include "vod/error.hpp"

namespace vod {

namespace {

constexpr std::size_t kMaxFactors = 10;

/// All points of levels^k in lexicographic order.
std::vector<RationalVector> grid(const std::vector<int>& levels, std::size_t k) {
  std::vector<RationalVector> out;
  std::vector<std::size_t> idx(k, 0);
  while (true) {
    RationalVector x(k);
    for (std::size_t i = 0; i < k; ++i) x[i] = levels[idx[i]];
    out.push_back(std::move(x));
    std::size_t pos = k;
    while (pos > 0) {
      --pos;
      if (++idx[pos] < levels.size()) break;
      idx[pos] = 0;
      if (pos == 0) return out;
    }
    if (k == 0) return out;
  }
}

std::size_t count_ones(const RationalVector& x) {
  return static_cast<std::size_t>(std::count_if(x.begin(), x.end(), [](const Rational& v) { return v == 1; }));
}

DesignProblem make_problem(Family family, std::size_t k, int p, std::vector<RationalVector> support,
                           std::vector<RationalVector> extras) {
  std::sort(support.begin(), support.end(), LexLess{});
  std::sort(extras.begin(), extras.end(), LexLess{});
  DesignProblem prob;
  prob.name = std::string(family_name(family)) + "-k" + std::to_string(k) + "-p" + std::to_string(p);
  prob.k = k;
  prob.p = p;
  prob.support_size = support.size();
  prob.points = std::move(support);
  prob.points.insert(prob.points.end(), std::make_move_iterator(extras.begin()),
                     std::make_move_iterator(extras.end()));
  for (const auto& x : prob.points) prob.regressors.push_back(regressor(family, x));
  prob.m = prob.regressors.front().size();
  prob.validate();
  return prob;
}

}  // namespace

std::string_view family_name(Family f) {
  switch (f) {
    case Family::kSbw: return "sbw";
    case Family::kCbw: return "cbw";
    case Family::kMem: return "mem";
    case Family::kInt: return "int";
    case Family::kQwoi: return "qwoi";
    case Family::kCustom: return "custom";
  }
  return "custom";
}

Family parse_family(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "sbw") return Family::kSbw;
  if (s == "cbw") return Family::kCbw;
  if (s == "mem") return Family::kMem;
  if (s == "int") return Family::kInt;
  if (s == "qwoi") return Family::kQwoi;
  if (s == "custom") return Family::kCustom;
  throw InvalidArgument("unknown model family '" + std::string(name) + "'");
}

RationalVector regressor(Family family, std::span<const Rational> x) {
  const std::size_t k = x.size();
  RationalVector f;
  switch (family) {
    case Family::kSbw:
    case Family::kCbw:
      f.assign(x.begin(), x.end());
      break;
    case Family::kMem:
      f.push_back(1);
      f.insert(f.end(), x.begin(), x.end());
      break;
    case Family::kInt:
      f.push_back(1);
      f.insert(f.end(), x.begin(), x.end());
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) f.push_back(x[i] * x[j]);
      }
      break;
    case Family::kQwoi:
      f.push_back(1);
      f.insert(f.end(), x.begin(), x.end());
      for (std::size_t i = 0; i < k; ++i) f.push_back(x[i] * x[i]);
      break;
    case Family::kCustom:
      throw InvalidArgument("custom family has no built-in regressor");
  }
  return f;
}

CatalogModel build(Family family, std::size_t k, int p) {
  if (k == 0 || k > kMaxFactors) throw InvalidArgument("number of factors must be in [1, 10]");
  if (p > 0) throw InvalidArgument("criterion exponent must be an integer <= 0");

  std::vector<RationalVector> support;
  std::vector<RationalVector> extras;
  switch (family) {
    case Family::kSbw: {
      if (p != 0 && p != -1) throw InvalidArgument("sbw is supported for p = 0 and p = -1 only");
      // Odd k: V((k+1)/2). Even k: V(k/2) u V(k/2+1) for D, V(k/2) for A.
      std::vector<std::size_t> levels;
      if (k % 2 == 1) {
        levels = {(k + 1) / 2};
      } else if (p == 0) {
        levels = {k / 2, k / 2 + 1};
      } else {
        levels = {k / 2};
      }
      for (auto& x : grid({0, 1}, k)) {
        const auto ones = count_ones(x);
        if (std::find(levels.begin(), levels.end(), ones) != levels.end()) {
          support.push_back(std::move(x));
        } else {
          extras.push_back(std::move(x));
        }
      }
      break;
    }
    case Family::kCbw:
    case Family::kMem:
    case Family::kInt: {
      support = grid({-1, 1}, k);
      for (auto& x : grid({-1, 0, 1}, k)) {
        if (std::any_of(x.begin(), x.end(), [](const Rational& v) { return sgn(v) == 0; })) {
          extras.push_back(std::move(x));
        }
      }
      break;
    }
    case Family::kQwoi:
      if (p != 0) throw InvalidArgument("qwoi is supported for D-optimality (p = 0) only");
      support = grid({-1, 0, 1}, k);
      break;
    case Family::kCustom:
      throw InvalidArgument("custom models are loaded from a problem file");
  }

  CatalogModel model;
  model.family = family;
  model.k = k;
  model.p = p;
  model.problem = make_problem(family, k, p, std::move(support), std::move(extras));
  model.maximal_design = uniform_design(model.problem.d());
  model.symmetry_generators = symmetry_generators(model.problem, family_symmetries(family));
  return model;
}

SymmetryKinds family_symmetries(Family family) {
  switch (family) {
    case Family::kSbw: return {true, false, false};
    case Family::kCbw: return {true, true, true};
    case Family::kMem:
    case Family::kInt:
    case Family::kQwoi: return {true, true, false};
    case Family::kCustom: return {false, false, false};
  }
  return {};
}

std::vector<Permutation> symmetry_generators(const DesignProblem& problem, SymmetryKinds kinds) {
  const std::size_t d = problem.d();
  std::map<RationalVector, std::size_t, LexLess> index;
  for (std::size_t i = 0; i < d; ++i) index.emplace(problem.points[i], i);

  auto image_of = [&](auto&& transform) {
    Permutation g(d);
    for (std::size_t i = 0; i < d; ++i) {
      RationalVector y = problem.points[i];
      transform(y);
      const auto it = index.find(y);
      if (it == index.end()) throw InvalidArgument("symmetry does not map the support onto itself");
      g[i] = it->second;
    }
    return g;
  };

  std::vector<Permutation> gens;
  if (kinds.relabel) {
    for (std::size_t f = 0; f + 1 < problem.k; ++f) {
      gens.push_back(image_of([f](RationalVector& y) { std::swap(y[f], y[f + 1]); }));
    }
  }
  if (kinds.sign_flip) {
    for (std::size_t f = 0; f < problem.k; ++f) {
      gens.push_back(image_of([f](RationalVector& y) { y[f] = -y[f]; }));
    }
  }
  if (kinds.point_negation) {
    for (std::size_t i = 0; i < d; ++i) {
      RationalVector neg = problem.points[i];
      for (auto& v : neg) v = -v;
      const auto it = index.find(neg);
      if (it == index.end()) throw InvalidArgument("point negation leaves the support");
      if (it->second <= i) continue;
      Permutation g(d);
      for (std::size_t j = 0; j < d; ++j) g[j] = j;
      std::swap(g[i], g[it->second]);
      gens.push_back(std::move(g));
    }
  }
  return gens;
}

std::vector<Permutation> symmetry_generators(Family family, std::size_t k, int p) {
  return build(family, k, p).symmetry_generators;
}

RationalVector permute_weights(const Permutation& g, std::span<const Rational> w) {
  if (g.size() != w.size()) throw DimensionMismatch("permutation and weight vector lengths differ");
  RationalVector out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[g[i]] = w[i];
  return out;
}

Permutation parse_cycles(std::string_view text, std::size_t n) {
  Permutation g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = i;
  std::vector<bool> seen(n, false);
  std::size_t pos = 0;
  const std::string s = detail::trim(text);
  if (s.empty() || s == "()") return g;
  while (pos < s.size()) {
    if (std::isspace(static_cast<unsigned char>(s[pos]))) {
      ++pos;
      continue;
    }
    if (s[pos] != '(') throw ParseError("expected '(' in cycle notation: " + s);
    const auto close = s.find(')', pos);
    if (close == std::string::npos) throw ParseError("unterminated cycle: " + s);
    std::vector<std::size_t> cycle;
    for (const auto& tok : detail::tokens(s.substr(pos + 1, close - pos - 1))) {
      std::size_t v = 0;
      try {
        v = std::stoul(tok);
      } catch (const std::exception&) {
        throw ParseError("bad index '" + tok + "' in cycle notation");
      }
      if (v == 0 || v > n) throw ParseError("cycle index " + tok + " out of range");
      if (seen[v - 1]) throw ParseError("index " + tok + " repeated in cycle notation");
      seen[v - 1] = true;
      cycle.push_back(v - 1);
    }
    for (std::size_t i = 0; i < cycle.size(); ++i) g[cycle[i]] = cycle[(i + 1) % cycle.size()];
    pos = close + 1;
  }
  return g;
}

std::string format_cycles(const Permutation& g) {
  std::string out;
  std::vector<bool> seen(g.size(), false);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (seen[i] || g[i] == i) continue;
    out += '(';
    std::size_t j = i;
    bool first = true;
    while (!seen[j]) {
      seen[j] = true;
      if (!first) out += ' ';
      out += std::to_string(j + 1);
      first = false;
      j = g[j];
    }
    out += ')';
  }
  return out.empty() ? "()" : out;
}

namespace {

std::vector<RationalVector> parse_rows(const std::vector<std::string>& lines, const std::string& block) {
  std::vector<RationalVector> rows;
  for (const auto& line : lines) {
    RationalVector row;
    for (const auto& tok : detail::tokens(line)) row.push_back(parse_rational(tok));
    if (!row.empty()) rows.push_back(std::move(row));
  }
  for (const auto& r : rows) {
    if (r.size() != rows.front().size()) throw ParseError("ragged rows in block [" + block + "]");
  }
  return rows;
}

std::optional<Family> formula_tag(const std::vector<std::string>& lines) {
  for (const auto& line : lines) {
    auto toks = detail::tokens(line);
    if (toks.empty()) continue;
    if (toks.front() == "formula") {
      if (toks.size() != 2) throw ParseError("expected 'formula <family>'");
      toks.erase(toks.begin());
    }
    if (toks.size() == 1 && !toks.front().empty() && std::isalpha(static_cast<unsigned char>(toks.front()[0]))) {
      try {
        const Family f = parse_family(toks.front());
        if (f == Family::kCustom) throw ParseError("formula tag must name a built-in family");
        return f;
      } catch (const InvalidArgument& e) {
        throw ParseError(e.what());
      }
    }
    return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

CatalogModel parse_problem(std::string_view text, std::string name) {
  std::map<std::string, std::vector<std::string>> blocks;
  std::string current;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    const std::string line = detail::trim(detail::strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("malformed block header: " + line);
      current = detail::trim(line.substr(1, line.size() - 2));
      if (blocks.count(current)) throw ParseError("duplicate block [" + current + "]");
      blocks[current];
      continue;
    }
    if (current.empty()) throw ParseError("content before the first block header");
    blocks[current].push_back(line);
  }
  static const char* const known[] = {"points",  "regressors", "formula",  "extra_points", "extra_regressors",
                                      "maximal_weights", "criterion", "symmetry"};
  for (const auto& [key, _] : blocks) {
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) ==
        std::end(known)) {
      throw ParseError("unknown block [" + key + "]");
    }
  }
  for (const char* required : {"points", "maximal_weights", "criterion"}) {
    if (!blocks.count(required)) throw ParseError(std::string("missing block [") + required + "]");
  }

  auto support = parse_rows(blocks["points"], "points");
  if (support.empty()) throw ParseError("no points");
  const std::size_t k = support.front().size();
  std::vector<RationalVector> extras;
  if (blocks.count("extra_points")) extras = parse_rows(blocks["extra_points"], "extra_points");
  for (const auto& x : extras) {
    if (x.size() != k) throw ParseError("extra point with wrong number of factors");
  }

  std::optional<Family> tag;
  if (blocks.count("formula")) tag = formula_tag(blocks["formula"]);
  std::vector<RationalVector> regs;
  if (blocks.count("regressors")) {
    if (auto t = formula_tag(blocks["regressors"])) {
      tag = t;
    } else {
      regs = parse_rows(blocks["regressors"], "regressors");
    }
  }
  if (regs.empty() && !tag) throw ParseError("need explicit [regressors] or a formula tag");
  if (!regs.empty() && regs.size() != support.size()) throw ParseError("one regressor row per point required");

  std::vector<RationalVector> extra_regs;
  if (!regs.empty()) {
    if (blocks.count("extra_regressors")) extra_regs = parse_rows(blocks["extra_regressors"], "extra_regressors");
    if (extra_regs.size() != extras.size()) throw ParseError("one extra regressor row per extra point required");
  }

  const auto crit = detail::tokens(blocks["criterion"].empty() ? std::string() : blocks["criterion"].front());
  if (crit.size() != 1) throw ParseError("[criterion] must hold a single integer");
  int p = 0;
  try {
    std::size_t used = 0;
    p = std::stoi(crit.front(), &used);
    if (used != crit.front().size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw ParseError("criterion exponent must be an integer, got '" + crit.front() + "'");
  }
  if (p > 0) throw ParseError("criterion exponent must be <= 0");

  RationalVector weights;
  for (const auto& line : blocks["maximal_weights"]) {
    for (const auto& tok : detail::tokens(line)) weights.push_back(parse_rational(tok));
  }
  if (weights.size() != support.size()) throw ParseError("one maximal weight per point required");

  CatalogModel model;
  model.family = Family::kCustom;
  model.k = k;
  model.p = p;
  DesignProblem& prob = model.problem;
  prob.name = std::move(name);
  prob.k = k;
  prob.p = p;
  prob.support_size = support.size();
  prob.points = support;
  prob.points.insert(prob.points.end(), extras.begin(), extras.end());
  if (tag) {
    for (const auto& x : prob.points) prob.regressors.push_back(regressor(*tag, x));
  } else {
    prob.regressors = regs;
    prob.regressors.insert(prob.regressors.end(), extra_regs.begin(), extra_regs.end());
  }
  prob.m = prob.regressors.front().size();
  try {
    prob.validate();
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }

  if (blocks.count("symmetry")) {
    for (const auto& line : blocks["symmetry"]) model.symmetry_generators.push_back(parse_cycles(line, support.size()));
  }

  for (const auto& w : weights) {
    if (sgn(w) <= 0) throw VerificationFailure("maximal design must put positive weight on every point");
  }
  if (sum(weights) != 1) throw VerificationFailure("maximal weights sum to " + to_string(sum(weights)));
  model.maximal_design = Design{std::move(weights)};
  try {
    model.verdict = verify_maximal_optimal(prob, model.maximal_design);
  } catch (const SingularMatrix&) {
    throw VerificationFailure("information matrix of the declared design is singular");
  }
  return model;
}

CatalogModel load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open problem file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  CatalogModel model = parse_problem(buf.str(), path.stem().string());
  if (!model.verdict->passed) {
    throw VerificationFailure("declared maximal design violates the equivalence conditions at " +
                              std::to_string(model.verdict->violations.size()) + " candidate(s)");
  }
  return model;
}

std::string format_problem(const CatalogModel& model) {
  const DesignProblem& prob = model.problem;
  std::ostringstream out;
  auto row = [&out](std::span<const Rational> v) {
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? " " : "") << to_string(v[i]);
    out << '\n';
  };
  out << "[points]\n";
  for (std::size_t i = 0; i < prob.d(); ++i) row(prob.points[i]);
  out << "[regressors]\n";
  for (std::size_t i = 0; i < prob.d(); ++i) row(prob.regressors[i]);
  if (prob.candidate_count() > prob.d()) {
    out << "[extra_points]\n";
    for (std::size_t i = prob.d(); i < prob.candidate_count(); ++i) row(prob.points[i]);
    out << "[extra_regressors]\n";
    for (std::size_t i = prob.d(); i < prob.candidate_count(); ++i) row(prob.regressors[i]);
  }
  out << "[maximal_weights]\n";
  row(model.maximal_design.weights);
  out << "[criterion]\n" << prob.p << '\n';
  if (!model.symmetry_generators.empty()) {
    out << "[symmetry]\n";
    for (const auto& g : model.symmetry_generators) out << format_cycles(g) << '\n';
  }
  return out.str();
}

}  // namespace vod
