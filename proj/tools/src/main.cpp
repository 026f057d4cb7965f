// vod: command-line front end for the optimal-design polytope toolkit.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "vod/analysis.hpp"
#include "vod/catalog.hpp"
#include "vod/enumerate.hpp"
#include "vod/error.hpp"
#include "vod/io.hpp"
#include "vod/secondary.hpp"

namespace fs = std::filesystem;
using namespace vod;

namespace {

struct RunConfig {
  std::string family;
  std::size_t k = 0;
  int p = 0;
  std::string problem_file;
  std::string out;
  std::size_t oracle_cap = 1'000'000;
  std::size_t ray_cap = 20'000'000;
  unsigned threads = 0;
  std::string format = "json";

  std::size_t nmax = 100;
  std::string axes;
  std::string cost_file;
  std::string r_file;
  std::string objective = "sqnorm";
  std::string parametrization;
  double tol = 1e-8;
  std::size_t max_iter = 100000;
  bool scan = false;
  std::size_t vertex = 0;
  std::string design_file;
  std::size_t n = 0;
};

CatalogModel load_model(const RunConfig& cfg) {
  const bool have_file = !cfg.problem_file.empty();
  const bool have_family = !cfg.family.empty();
  if (have_file == have_family) throw InvalidArgument("give exactly one of --problem-file and --family");
  if (have_file) return load_problem(cfg.problem_file);
  if (cfg.k == 0) throw InvalidArgument("--family needs --k");
  return build(parse_family(cfg.family), cfg.k, cfg.p);
}

EnumOptions enum_options(const RunConfig& cfg) {
  EnumOptions o;
  o.ray_cap = cfg.ray_cap;
  o.threads = cfg.threads;
  return o;
}

/// Writes a file under --out when it was given.
template <class Fn>
void emit(const RunConfig& cfg, const std::string& name, Fn&& write) {
  if (cfg.out.empty()) return;
  fs::create_directories(cfg.out);
  const fs::path path = fs::path(cfg.out) / name;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  write(f);
}

std::vector<std::size_t> parse_index_list(const std::string& text, std::size_t d) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t i = 0;
    try {
      i = std::stoul(tok);
    } catch (const std::exception&) {
      throw ParseError("bad index '" + tok + "'");
    }
    if (i == 0 || i > d) throw InvalidArgument("index " + tok + " outside 1.." + std::to_string(d));
    out.push_back(i - 1);
  }
  return out;
}

RationalVector read_vector_file(const std::string& path, std::size_t d, const char* what) {
  std::ifstream f(path);
  if (!f) throw ParseError(std::string("cannot open ") + what + " file " + path);
  RationalVector v = read_rational_vector(f);
  if (v.size() != d) {
    throw ParseError(std::string(what) + " file has " + std::to_string(v.size()) + " entries, expected " +
                     std::to_string(d));
  }
  return v;
}

void print_support_histogram(const VodCatalog& cat) {
  std::map<std::size_t, std::map<Integer, std::size_t>> hist;
  for (const auto& inf : cat.info) ++hist[inf.support.size()][inf.size];
  for (const auto& [s, sizes] : hist) {
    std::cout << "  support " << s << ":";
    for (const auto& [n, c] : sizes) std::cout << " " << c << " x N=" << n;
    std::cout << '\n';
  }
}

int cmd_verify(const RunConfig& cfg) {
  CatalogModel model;
  if (!cfg.problem_file.empty() && cfg.family.empty()) {
    std::ifstream f(cfg.problem_file);
    if (!f) throw ParseError("cannot open problem file " + cfg.problem_file);
    std::stringstream buf;
    buf << f.rdbuf();
    model = parse_problem(buf.str(), fs::path(cfg.problem_file).stem().string());
  } else {
    model = load_model(cfg);
    model.verdict = verify_maximal_optimal(model.problem, model.maximal_design);
  }
  const Verdict& v = *model.verdict;
  std::size_t s = 0, t = 0;
  if (v.passed) {
    const auto poly = build_h_representation(model.problem, model.maximal_design);
    s = poly.s;
    t = poly.t;
  }
  std::cout << model.problem.name << ": " << (v.passed ? "PASS" : "FAIL") << '\n'
            << "  d=" << model.problem.d() << " m=" << model.problem.m << " p=" << model.problem.p
            << " threshold=" << to_string(v.threshold) << '\n'
            << "  equality " << v.equality_set.size() << ", strict " << v.strict_set.size() << ", violations "
            << v.violations.size() << '\n';
  if (v.passed) std::cout << "  s=" << s << " t=" << t << '\n';
  emit(cfg, "verdict.json", [&](std::ostream& o) { write_verdict_json(o, model.problem, v, s, t); });
  return v.passed ? 0 : static_cast<int>(ExitCode::kVerificationFailure);
}

int cmd_enumerate(const RunConfig& cfg) {
  const auto model = load_model(cfg);
  const auto cat = analyze(model, enum_options(cfg));
  std::cout << cat.problem << ": d=" << cat.polytope.d << " s=" << cat.polytope.s << " t=" << cat.polytope.t
            << " ell=" << cat.ell() << '\n';
  print_support_histogram(cat);
  if (cfg.format == "csv") {
    emit(cfg, "vertices.csv", [&](std::ostream& o) { write_vertices_csv(o, cat.vertices); });
  } else {
    emit(cfg, "vertices.json", [&](std::ostream& o) { write_vertices_json(o, cat.polytope, cat.vertices); });
  }
  return 0;
}

int cmd_classify(const RunConfig& cfg) {
  const auto cat = analyze(load_model(cfg), enum_options(cfg));
  std::cout << cat.problem << ": ell=" << cat.ell() << ", " << cat.orbits.orbits.size() << " orbit(s)\n";
  for (const auto& o : cat.orbits.orbits) {
    const auto& inf = cat.info[o.representative];
    std::cout << "  orbit of " << o.size() << " represented by vertex " << o.representative + 1 << " (support "
              << inf.support.size() << ", N=" << inf.size << ")\n";
  }
  emit(cfg, "orbits.json", [&](std::ostream& o) { write_orbits_json(o, cat); });
  return 0;
}

int cmd_report(const RunConfig& cfg) {
  const auto cat = analyze(load_model(cfg), enum_options(cfg));
  const Report rep = make_report(cat, cfg.nmax);
  std::cout << cat.problem << ": ell=" << cat.ell() << " t=" << cat.polytope.t << " bounds "
            << (cat.bounds.sandwiches(cat.ell()) ? "hold" : "VIOLATED") << '\n';
  emit(cfg, "report.json", [&](std::ostream& o) { write_report_json(o, rep); });
  return 0;
}

std::unique_ptr<Objective> make_objective(const RunConfig& cfg, const CatalogModel& model) {
  const std::string& name = cfg.objective;
  const std::size_t d = model.problem.d();
  if (name == "entropy") return entropy_objective();
  if (name == "sqnorm") return norm_objective(2.0, true);
  if (name == "maxnorm") return negated(norm_objective(std::numeric_limits<double>::infinity(), false));
  if (name.rfind("norm:", 0) == 0) return norm_objective(std::stod(name.substr(5)), false);
  if (name == "linear") {
    if (cfg.cost_file.empty()) throw InvalidArgument("objective 'linear' needs --cost-file");
    return linear_objective(read_vector_file(cfg.cost_file, d, "cost"));
  }
  if (name == "riopt") {
    if (cfg.r_file.empty()) throw InvalidArgument("objective 'riopt' needs --r-file");
    return heteroskedastic_d_objective(model.problem, read_vector_file(cfg.r_file, d, "r"));
  }
  throw InvalidArgument("unknown objective '" + name + "'");
}

int cmd_optimize(const RunConfig& cfg) {
  const auto model = load_model(cfg);
  const auto cat = analyze(model, enum_options(cfg));
  const auto obj = make_objective(cfg, model);
  if (cfg.scan) {
    const auto res = extremal_concave_scan(cat, *obj);
    std::cout << obj->name() << ": minimum " << res.value << " at " << res.minimizers.size() << " vertex(es):";
    for (auto j : res.minimizers) std::cout << ' ' << j + 1;
    std::cout << '\n';
    return 0;
  }
  OptimizeConfig oc;
  oc.tol = cfg.tol;
  oc.max_iter = cfg.max_iter;
  if (!cfg.parametrization.empty()) oc.parametrization = parse_parametrization(cfg.parametrization);
  const auto res = optimize(cat, *obj, oc);
  std::cout << obj->name() << " (" << parametrization_name(res.parametrization) << "): value " << res.value
            << ", gap " << res.gap << ", " << res.iterations << " iteration(s)"
            << (res.converged ? "" : ", NOT converged") << '\n';
  for (std::size_t i = 0; i < res.weights.size(); ++i) {
    if (res.weights[i] > 1e-12) std::cout << "  w" << i + 1 << " = " << res.weights[i] << '\n';
  }
  emit(cfg, "optimize.json", [&](std::ostream& o) { write_secondary_json(o, obj->name(), res); });
  return res.converged ? 0 : static_cast<int>(ExitCode::kFailure);
}

int cmd_project(const RunConfig& cfg) {
  const auto cat = analyze(load_model(cfg), enum_options(cfg));
  if (cfg.axes.empty()) throw InvalidArgument("project needs --axes");
  const auto proj = project(cat, parse_index_list(cfg.axes, cat.polytope.d));
  std::cout << "projection onto " << cfg.axes << ": " << proj.points.size() << " distinct point(s), dimension "
            << proj.dimension << ", " << proj.facets.size() << " facet(s)\n";
  for (const auto& pt : proj.points) {
    std::cout << " ";
    for (const auto& c : pt.coords) std::cout << ' ' << to_string(c);
    std::cout << "  x" << pt.multiplicity() << '\n';
  }
  if (cfg.format == "csv") {
    emit(cfg, "projection.csv", [&](std::ostream& o) { write_projection_csv(o, proj); });
  } else {
    emit(cfg, "projection.json", [&](std::ostream& o) { write_projection_json(o, proj); });
  }
  return 0;
}

int cmd_round(const RunConfig& cfg) {
  const auto model = load_model(cfg);
  if (cfg.n == 0) throw InvalidArgument("round needs --n");
  Design design;
  if (!cfg.design_file.empty()) {
    std::ifstream f(cfg.design_file);
    if (!f) throw ParseError("cannot open design file " + cfg.design_file);
    design = design_from_table(model.problem, read_design_table(f));
  } else if (cfg.vertex > 0) {
    const auto cat = analyze(model, enum_options(cfg));
    if (cfg.vertex > cat.ell()) throw InvalidArgument("vertex index outside 1.." + std::to_string(cat.ell()));
    design = Design{cat.vertices.vertices[cfg.vertex - 1]};
  } else {
    design = model.maximal_design;
  }
  const auto counts = efficient_round(design.weights, cfg.n);
  std::cout << "exact design of size " << cfg.n << ":\n";
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) continue;
    std::cout << "  (";
    for (std::size_t a = 0; a < model.problem.k; ++a) std::cout << (a ? "," : "") << to_string(model.problem.points[i][a]);
    std::cout << ") x " << counts[i] << '\n';
  }
  emit(cfg, "round.csv", [&](std::ostream& o) {
    RationalVector w(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) w[i] = Rational(static_cast<long>(counts[i])) / static_cast<long>(cfg.n);
    write_design_table(o, model.problem, Design{w});
  });
  return 0;
}

int cmd_sizes(const RunConfig& cfg) {
  const auto cat = analyze(load_model(cfg), enum_options(cfg));
  const auto sizes = exact_design_sizes(cat, cfg.nmax);
  std::cout << cat.problem << ": gcd " << sizes.gcd << ", achievable sizes up to " << cfg.nmax << ":";
  for (auto n : sizes.sizes) std::cout << ' ' << n;
  std::cout << '\n';
  if (sizes.stable_from) std::cout << "  every multiple of " << sizes.gcd << " from " << *sizes.stable_from << '\n';
  emit(cfg, "sizes.json", [&](std::ostream& o) { write_sizes_json(o, sizes); });
  return 0;
}

int cmd_oracle_check(const RunConfig& cfg) {
  const auto model = load_model(cfg);
  const auto poly = build_h_representation(model.problem, model.maximal_design);
  OracleOptions oo;
  oo.subset_cap = cfg.oracle_cap;
  oo.threads = cfg.threads == 0 ? resolve_threads(0) : cfg.threads;
  const auto oracle = oracle_enumerate(poly, oo);
  const auto dd = enumerate_vertices(poly, enum_options(cfg));
  const bool same = oracle == dd;
  std::cout << model.problem.name << ": double description " << dd.size() << ", oracle " << oracle.size() << " -> "
            << (same ? "identical" : "MISMATCH") << '\n';
  return same ? 0 : static_cast<int>(ExitCode::kFailure);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vertex optimal designs: exact enumeration and analysis"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--family", cfg.family, "sbw, cbw, mem, int or qwoi");
    sub->add_option("--k", cfg.k, "number of factors");
    sub->add_option("--p", cfg.p, "criterion exponent (0 = D, -1 = A)");
    sub->add_option("--problem-file", cfg.problem_file, "custom problem file");
    sub->add_option("--out", cfg.out, "output directory");
    sub->add_option("--oracle-cap", cfg.oracle_cap, "largest C(d, s) the oracle accepts");
    sub->add_option("--ray-cap", cfg.ray_cap, "largest intermediate ray count");
    sub->add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
    sub->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };

  using Handler = int (*)(const RunConfig&);
  std::vector<std::pair<CLI::App*, Handler>> subs;
  auto add = [&](const char* name, const char* help, Handler h) {
    auto* sub = app.add_subcommand(name, help);
    common(sub);
    subs.emplace_back(sub, h);
    return sub;
  };

  add("verify", "check the equivalence conditions for the maximal design", cmd_verify);
  add("enumerate", "enumerate all vertex optimal designs", cmd_enumerate);
  add("classify", "split the vertices into isomorphism classes", cmd_classify);
  add("report", "full JSON report", cmd_report)->add_option("--nmax", cfg.nmax, "largest exact size considered");
  auto* opt = add("optimize", "optimize a secondary criterion over the optimal designs", cmd_optimize);
  opt->add_option("--objective", cfg.objective, "sqnorm, norm:<p>, entropy, maxnorm, linear or riopt");
  opt->add_option("--cost-file", cfg.cost_file, "d rationals for the linear objective");
  opt->add_option("--r-file", cfg.r_file, "d coefficients in (0,1] for riopt");
  opt->add_option("--parametrization", cfg.parametrization, "vertex, reduced or ambient");
  opt->add_option("--tol", cfg.tol, "Frank-Wolfe gap tolerance");
  opt->add_option("--max-iter", cfg.max_iter, "iteration limit");
  opt->add_flag("--scan", cfg.scan, "minimize a concave objective over the vertices instead");
  add("project", "project the vertices onto 1-3 coordinates", cmd_project)
      ->add_option("--axes", cfg.axes, "comma-separated 1-based support indices");
  auto* rnd = add("round", "efficient rounding to an exact design", cmd_round);
  rnd->add_option("--n", cfg.n, "size of the exact design");
  rnd->add_option("--vertex", cfg.vertex, "1-based vertex to round");
  rnd->add_option("--design-file", cfg.design_file, "design table to round");
  add("sizes", "achievable exact design sizes", cmd_sizes)->add_option("--nmax", cfg.nmax, "largest size");
  auto* orc = add("oracle-check", "compare double description with brute force", cmd_oracle_check);
  orc->add_option("--cost-file", cfg.cost_file)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(ExitCode::kParseError);
  }

  try {
    for (const auto& [sub, handler] : subs) {
      if (sub->parsed()) return handler(cfg);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::kFailure);
  }
  return static_cast<int>(ExitCode::kFailure);
}
