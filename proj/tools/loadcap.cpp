#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "loadcap/capacity.hpp"
#include "loadcap/errors.hpp"
#include "loadcap/kinematics.hpp"
#include "loadcap/mesh.hpp"
#include "loadcap/report.hpp"
#include "loadcap/stress.hpp"
#include "loadcap/verify.hpp"

namespace {

using namespace loadcap;

constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;

std::string slurp(const std::string& path, std::string_view what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + std::string(what) + " file " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct Loaded {
  std::string mesh_digest;
  DiscreteOperators ops;
};

Loaded load_mesh(const std::string& path, NormPair norms) {
  const std::string text = slurp(path, "mesh");
  Mesh mesh;
  try {
    mesh = parse_mesh(text);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
  return {report::digest(text), assemble(mesh, norms)};
}

TractionField load_traction(const std::string& path, const DiscreteOperators& ops,
                            std::string& digest) {
  const std::string text = slurp(path, "traction");
  digest = report::digest(text);
  try {
    return parse_traction(text, ops);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

NormPair parse_norms(const std::string& id) {
  if (id != "l1linf") throw ValidationError("unknown norm pair \"" + id + "\" (allowed: l1linf)");
  return NormPair::l1_linf();
}

struct Options {
  std::string mesh;
  std::string traction;
  std::string mode = "elastic";
  std::string norm = "l1linf";
  std::string method = "auto";
  double y0 = 1.0;
  std::uint64_t seed = 1;
  int trials = 20;
  // generate
  std::string kind;
  std::string out;
  double length = 1.0;
  double area = 1.0;
  int elements = 1;
  double width = 1.0;
  double height = 1.0;
  int nx = 1;
  int ny = 1;
  std::string support = "left";
  std::string load = "right";
};

int cmd_analyze(const Options& o) {
  const NormPair norms = parse_norms(o.norm);
  const Mode mode = parse_mode(o.mode);
  Loaded m = load_mesh(o.mesh, norms);
  report::Inputs in{m.mesh_digest, {}, mode, norms};
  const TractionField t = load_traction(o.traction, m.ops, in.traction_digest);
  if (mode == Mode::Plastic) require_plastic_viable(m.ops);
  const OptimalStressResult r = optimal_stress(m.ops, t, mode);
  const EquilibriumCheck eq = check_equilibrium(m.ops, r.sigma_hat, t, 1e-8);
  std::cout << report::analyze(in, m.ops, t, r, eq);
  std::cerr << "sigma_opt = " << r.sigma_opt << " (" << to_string(mode)
            << "), duality gap = " << r.duality_gap
            << ", equilibrium residual = " << eq.residual << "\n";
  return eq.ok ? 0 : kExitSolver;
}

int cmd_capacity(const Options& o) {
  const NormPair norms = parse_norms(o.norm);
  const Mode mode = parse_mode(o.mode);
  Loaded m = load_mesh(o.mesh, norms);
  const bool under_cap = m.ops.n_boundary_components() <= kEnumerationCap;
  KMethod method;
  bool caps_hit = false;
  if (o.method == "exact") {
    method = KMethod::ExactVertexEnumeration;
  } else if (o.method == "heuristic") {
    method = KMethod::AlternatingHeuristic;
  } else if (o.method == "auto") {
    method = under_cap ? KMethod::ExactVertexEnumeration : KMethod::AlternatingHeuristic;
    caps_hit = !under_cap;
  } else {
    throw ValidationError("unknown method \"" + o.method + "\" (allowed: exact, heuristic, auto)");
  }
  const CapacityResult r = load_capacity(m.ops, mode, method);
  std::optional<DualCheckResult> dual;
  if (method == KMethod::ExactVertexEnumeration) {
    dual = generalized_K_dual_check(m.ops, mode);
    if (std::abs(dual->K_prime - r.K) > kDualityTol * (1.0 + r.K)) {
      std::cout << report::capacity({m.mesh_digest, {}, mode, norms}, m.ops, r, dual, caps_hit);
      std::cerr << "K = " << r.K << " disagrees with traction-side K' = " << dual->K_prime << "\n";
      return kExitSolver;
    }
  }
  caps_hit = caps_hit || r.iteration_cap_hit;
  std::cout << report::capacity({m.mesh_digest, {}, mode, norms}, m.ops, r, dual, caps_hit);
  std::cerr << "K = " << r.K << ", C = " << r.C << " (" << to_string(mode) << ", "
            << to_string(method) << (r.lower_bound ? ", K is a lower bound" : "") << ")\n";
  return 0;
}

int cmd_limit(const Options& o) {
  const NormPair norms = parse_norms(o.norm);
  Loaded m = load_mesh(o.mesh, norms);
  report::Inputs in{m.mesh_digest, {}, Mode::Plastic, norms};
  const TractionField t = load_traction(o.traction, m.ops, in.traction_digest);
  const LimitResult lim = limit_analysis(m.ops, t, o.y0);
  const KinematicLimitCheck kin = kinematic_limit_check(m.ops, t, o.y0);
  std::cout << report::limit(in, m.ops, t, lim, kin);
  std::cerr << "lambda* = " << lim.lambda_star << " (Y0 = " << o.y0
            << ", sigma_opt = " << lim.sigma_opt << "), kinematic gap = " << kin.gap << "\n";
  return 0;
}

int cmd_verify(const Options& o) {
  const std::string text = slurp(o.mesh, "mesh");
  Mesh mesh;
  try {
    mesh = parse_mesh(text);
  } catch (const ValidationError& e) {
    throw ValidationError(o.mesh + ": " + e.what());
  }
  const VerifyReport r = run_verify(mesh, o.seed, o.trials);
  std::cout << report::verify(report::digest(text), r);
  for (const CheckTally& c : r.checks) {
    std::cerr << (c.ok() ? "pass " : "FAIL ") << c.name << " " << c.passed << "/" << c.total;
    if (!c.skipped.empty()) std::cerr << " (skipped: " << c.skipped << ")";
    if (!c.first_failure.empty()) std::cerr << " [" << c.first_failure << "]";
    std::cerr << "\n";
  }
  return r.ok() ? 0 : kExitSolver;
}

int cmd_generate(const Options& o) {
  Mesh mesh;
  try {
    if (o.kind == "bar") {
      mesh = generate_bar(o.length, o.area, o.elements);
    } else if (o.kind == "rectangle") {
      mesh = generate_rectangle(o.width, o.height, o.nx, o.ny, parse_edge(o.support),
                                parse_edge(o.load));
    } else {
      throw ValidationError("unknown mesh kind \"" + o.kind + "\" (allowed: bar, rectangle)");
    }
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  if (o.out.empty()) {
    std::cout << format_mesh(mesh);
  } else {
    write_mesh(mesh, o.out);
  }
  std::cerr << mesh.elements.size() << " elements, " << mesh.facets_with(FacetLabel::GammaT).size()
            << " gammaT facets\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal stress, load capacity and limit analysis on simplex meshes"};
  app.require_subcommand(1);
  Options o;

  auto* analyze = app.add_subcommand("analyze", "optimal stress for a traction");
  analyze->add_option("--mesh", o.mesh, "mesh file")->required();
  analyze->add_option("--traction", o.traction, "traction file")->required();
  analyze->add_option("--mode", o.mode, "elastic or plastic")->capture_default_str();
  analyze->add_option("--norm", o.norm, "norm pair")->capture_default_str();

  auto* capacity = app.add_subcommand("capacity", "stress concentration factor K and C = 1/K");
  capacity->add_option("--mesh", o.mesh, "mesh file")->required();
  capacity->add_option("--mode", o.mode, "elastic or plastic")->capture_default_str();
  capacity->add_option("--norm", o.norm, "norm pair")->capture_default_str();
  capacity->add_option("--method", o.method, "exact, heuristic or auto")->capture_default_str();

  auto* limit = app.add_subcommand("limit", "limit-analysis factor");
  limit->add_option("--mesh", o.mesh, "mesh file")->required();
  limit->add_option("--traction", o.traction, "traction file")->required();
  limit->add_option("--y0", o.y0, "yield stress")->capture_default_str();
  limit->add_option("--norm", o.norm, "norm pair")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "seeded invariant suite");
  verify->add_option("--mesh", o.mesh, "mesh file")->required();
  verify->add_option("--seed", o.seed, "random seed")->capture_default_str();
  verify->add_option("--trials", o.trials, "sampled tractions per mode")->capture_default_str();

  auto* generate = app.add_subcommand("generate", "write a structured mesh");
  generate->add_option("kind", o.kind, "bar or rectangle")->required();
  generate->add_option("--out", o.out, "output file (default: stdout)");
  generate->add_option("--length", o.length, "bar length")->capture_default_str();
  generate->add_option("--area", o.area, "bar cross-section area")->capture_default_str();
  generate->add_option("--elements", o.elements, "bar elements")->capture_default_str();
  generate->add_option("--width", o.width, "rectangle width")->capture_default_str();
  generate->add_option("--height", o.height, "rectangle height")->capture_default_str();
  generate->add_option("--nx", o.nx, "cells along x")->capture_default_str();
  generate->add_option("--ny", o.ny, "cells along y")->capture_default_str();
  generate->add_option("--support", o.support, "gamma0 edge")->capture_default_str();
  generate->add_option("--load", o.load, "first loaded edge")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  const auto start = std::chrono::steady_clock::now();
  int code = 0;
  try {
    if (analyze->parsed()) code = cmd_analyze(o);
    if (capacity->parsed()) code = cmd_capacity(o);
    if (limit->parsed()) code = cmd_limit(o);
    if (verify->parsed()) code = cmd_verify(o);
    if (generate->parsed()) code = cmd_generate(o);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitSolver;
  }
  const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - start;
  std::fprintf(stderr, "wall time %.3f s\n", wall.count());
  return code;
}
