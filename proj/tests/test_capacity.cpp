#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "loadcap/capacity.hpp"
#include "loadcap/errors.hpp"
#include "loadcap/mesh.hpp"
#include "oracles.hpp"

using namespace loadcap;

namespace {

TractionField random_traction(const DiscreteOperators& ops, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TractionField t = TractionField::zero(ops.dim(), ops.n_traction_facets());
  for (Eigen::Index i = 0; i < t.values.size(); ++i) t.values[i] = u(rng);
  return t;
}

DiscreteOperators load(const char* name) { return assemble(read_mesh(oracle::data_path(name))); }

/// Same geometry with nodes listed in reverse order.
Mesh renumbered(const Mesh& m) {
  Mesh r = m;
  const std::size_t n = m.nodes.size();
  for (std::size_t i = 0; i < n; ++i) r.nodes[i] = m.nodes[n - 1 - i];
  for (auto& e : r.elements) {
    for (auto& v : e.nodes) v = n - 1 - v;
  }
  for (auto& f : r.facets) {
    for (auto& v : f.nodes) v = n - 1 - v;
  }
  return r;
}

}  // namespace

TEST_CASE("bar capacity") {
  for (double L : {1.0, 2.0}) {
    for (double A : {1.0, 2.0}) {
      for (int n : {1, 2, 4}) {
        const DiscreteOperators ops = assemble(generate_bar(L, A, n));
        const CapacityResult r = load_capacity(ops, Mode::Elastic, KMethod::ExactVertexEnumeration);
        CHECK(r.K == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(r.C == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(r.lp_solves == 1);
        CHECK(generalized_K_dual_check(ops, Mode::Elastic).K_prime == doctest::Approx(1.0));
      }
    }
  }
  const DiscreteOperators ops = assemble(generate_bar(1.0, 1.0, 1));
  TractionField t = TractionField::zero(1, 1);
  t.values[0] = 1.0;
  CHECK(concentration_factor_for(ops, t, Mode::Elastic) == doctest::Approx(1.0));
  t.values[0] = 5.0;
  CHECK(concentration_factor_for(ops, t, Mode::Elastic) == doctest::Approx(1.0));
  CHECK_THROWS_AS(concentration_factor_for(ops, TractionField::zero(1, 1), Mode::Elastic), ValidationError);
  CHECK_THROWS_AS(generalized_K(ops, Mode::Plastic, KMethod::ExactVertexEnumeration), ValidationError);
}

TEST_CASE("reference K values from an independent discretization") {
  struct Case {
    const char* mesh;
    double elastic;
    double plastic;
  };
  for (const Case& c : {Case{"rect_1x1.json", 3.0, 2.0}, Case{"rect_2x1.json", 13.0 / 3.0, 2.5},
                        Case{"two_tet.json", 8.350852961085884, 5.240810621445153}}) {
    CAPTURE(c.mesh);
    const DiscreteOperators ops = load(c.mesh);
    const CapacityResult e = load_capacity(ops, Mode::Elastic, KMethod::ExactVertexEnumeration);
    const CapacityResult p = load_capacity(ops, Mode::Plastic, KMethod::ExactVertexEnumeration);
    CHECK(e.K == doctest::Approx(c.elastic).epsilon(1e-9));
    CHECK(p.K == doctest::Approx(c.plastic).epsilon(1e-9));
    CHECK(e.C * e.K == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p.C * p.K == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_FALSE(e.lower_bound);
  }
  const DiscreteOperators r12 = assemble(generate_rectangle(1.0, 1.0, 1, 2, Edge::Left, Edge::Right));
  CHECK(generalized_K(r12, Mode::Elastic, KMethod::ExactVertexEnumeration).K ==
        doctest::Approx(11.0 / 3.0).epsilon(1e-9));
  CHECK(generalized_K(r12, Mode::Plastic, KMethod::ExactVertexEnumeration).K ==
        doctest::Approx(33.0 / 13.0).epsilon(1e-9));
}

TEST_CASE("K matches vertex enumeration of the kinematic ball") {
  for (const auto& mesh : {generate_rectangle(1.0, 1.0, 1, 1, Edge::Left, Edge::Right),
                           generate_rectangle(2.0, 1.0, 2, 1, Edge::Left, Edge::Bottom),
                           generate_rectangle(1.0, 1.0, 1, 1, Edge::Top, Edge::Bottom),
                           generate_bar(1.0, 2.0, 3)}) {
    const DiscreteOperators ops = assemble(mesh);
    CHECK(generalized_K(ops, Mode::Elastic, KMethod::ExactVertexEnumeration).K ==
          doctest::Approx(oracle::K(ops, Mode::Elastic)).epsilon(1e-8));
    if (mesh.dim == 2) {
      CHECK(generalized_K(ops, Mode::Plastic, KMethod::ExactVertexEnumeration).K ==
            doctest::Approx(oracle::K(ops, Mode::Plastic)).epsilon(1e-8));
    }
  }
  const DiscreteOperators tet = load("two_tet.json");
  CHECK(generalized_K(tet, Mode::Elastic, KMethod::ExactVertexEnumeration).K ==
        doctest::Approx(oracle::K(tet, Mode::Elastic)).epsilon(1e-8));
}

TEST_CASE("certificate reproduces K and the worst traction attains it") {
  for (const char* name : {"rect_1x1.json", "rect_2x1.json", "two_tet.json"}) {
    const DiscreteOperators ops = load(name);
    for (Mode mode : {Mode::Elastic, Mode::Plastic}) {
      const CapacityResult r = generalized_K(ops, mode, KMethod::ExactVertexEnumeration);
      const double kn = kinematic_norm(ops, r.certificate, mode);
      CHECK(trace_norm_l1(ops, r.certificate) / kn == doctest::Approx(r.K).epsilon(1e-6));
      CHECK(traction_sup_norm(ops, r.worst_traction) == doctest::Approx(1.0));
      CHECK(concentration_factor_for(ops, r.worst_traction, mode) == doctest::Approx(r.K).epsilon(1e-6));
    }
  }
}

TEST_CASE("K equals its traction-side counterpart") {
  for (const char* name : {"rect_1x1.json", "rect_2x1.json", "two_tet.json"}) {
    const DiscreteOperators ops = load(name);
    for (Mode mode : {Mode::Elastic, Mode::Plastic}) {
      const double K = generalized_K(ops, mode, KMethod::ExactVertexEnumeration).K;
      CHECK(std::abs(generalized_K_dual_check(ops, mode).K_prime - K) <= 1e-6 * (1.0 + K));
    }
  }
}

TEST_CASE("K bounds every sampled concentration factor") {
  std::mt19937_64 rng(4);
  const DiscreteOperators ops = load("rect_2x1.json");
  for (Mode mode : {Mode::Elastic, Mode::Plastic}) {
    const double K = generalized_K(ops, mode, KMethod::ExactVertexEnumeration).K;
    for (int k = 0; k < 10; ++k) {
      CHECK(concentration_factor_for(ops, random_traction(ops, rng), mode) <= K + 1e-9);
    }
  }
}

TEST_CASE("heuristic is a flagged lower bound") {
  for (const char* name : {"rect_1x1.json", "rect_2x1.json", "two_tet.json"}) {
    const DiscreteOperators ops = load(name);
    for (Mode mode : {Mode::Elastic, Mode::Plastic}) {
      const CapacityResult h = load_capacity(ops, mode, KMethod::AlternatingHeuristic);
      const CapacityResult e = load_capacity(ops, mode, KMethod::ExactVertexEnumeration);
      CHECK(h.lower_bound);
      CHECK(h.method == KMethod::AlternatingHeuristic);
      CHECK(h.K <= e.K + 1e-8);
      CHECK(h.K > 0.0);
      CHECK(h.lp_solves <= static_cast<std::size_t>(kHeuristicIterationCap));
    }
  }
}

TEST_CASE("exact enumeration is capped") {
  const DiscreteOperators ops = assemble(generate_rectangle(3.0, 3.0, 3, 3, Edge::Left, Edge::Right));
  REQUIRE(ops.n_boundary_components() > kEnumerationCap);
  CHECK_THROWS_WITH_AS(generalized_K(ops, Mode::Elastic, KMethod::ExactVertexEnumeration),
                       doctest::Contains("16"), ValidationError);
  CHECK_THROWS_AS(generalized_K_dual_check(ops, Mode::Elastic), ValidationError);
  const CapacityResult h = load_capacity(ops, Mode::Elastic, KMethod::AlternatingHeuristic);
  CHECK(h.lower_bound);
  CHECK(h.C == doctest::Approx(1.0 / h.K));
}

TEST_CASE("K is invariant under node renumbering") {
  const Mesh m = generate_rectangle(2.0, 1.0, 2, 1, Edge::Left, Edge::Right);
  for (Mode mode : {Mode::Elastic, Mode::Plastic}) {
    CHECK(generalized_K(assemble(renumbered(m)), mode, KMethod::ExactVertexEnumeration).K ==
          doctest::Approx(generalized_K(assemble(m), mode, KMethod::ExactVertexEnumeration).K).epsilon(1e-9));
  }
}

TEST_CASE("limit analysis") {
  const DiscreteOperators ops = load("rect_2x1.json");
  const TractionField t = read_traction(oracle::data_path("rect_2x1.traction.json"), ops);
  const LimitResult r = limit_analysis(ops, t, 2.0);
  CHECK(r.sigma_opt == doctest::Approx(0.7833333333333334).epsilon(1e-9));
  CHECK(r.lambda_star * r.sigma_opt == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(r.sigma_opt_collapse == doctest::Approx(2.0).epsilon(1e-6));
  CHECK((r.t_collapse.values - t.values * r.lambda_star).norm() == 0.0);

  // projection is idempotent
  const TractionField once = project_to_collapse(ops, t, 2.0);
  const TractionField twice = project_to_collapse(ops, once, 2.0);
  CHECK((once.values - twice.values).lpNorm<Eigen::Infinity>() <= 1e-9);

  // lambda*(s t) = lambda*(t) / s
  TractionField t4 = t;
  t4.values *= 4.0;
  CHECK(limit_analysis(ops, t4, 2.0).lambda_star == doctest::Approx(r.lambda_star / 4.0).epsilon(1e-9));

  CHECK_THROWS_AS(limit_analysis(ops, t, 0.0), ValidationError);
  CHECK_THROWS_AS(limit_analysis(ops, TractionField::zero(2, 5), 1.0), ValidationError);
  CHECK_THROWS_AS(limit_analysis(assemble(generate_bar(1.0, 1.0, 2)), t, 1.0), std::exception);
}

TEST_CASE("static and kinematic limit factors agree") {
  std::mt19937_64 rng(8);
  for (const char* name : {"rect_1x1.json", "rect_2x1.json", "two_tet.json"}) {
    const DiscreteOperators ops = load(name);
    for (int k = 0; k < 3; ++k) {
      const TractionField t = random_traction(ops, rng);
      const KinematicLimitCheck c = kinematic_limit_check(ops, t, 1.5);
      CHECK(c.gap <= 1e-6 * (1.0 + c.lambda_static));
      TractionField t2 = t;
      t2.values *= 2.0;
      const KinematicLimitCheck c2 = kinematic_limit_check(ops, t2, 1.5);
      CHECK(c2.lambda_static == doctest::Approx(c.lambda_static / 2.0).epsilon(1e-9));
      CHECK(c2.lambda_kinematic == doctest::Approx(c.lambda_kinematic / 2.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("load capacity safety statement") {
  const DiscreteOperators ops = load("rect_1x1.json");
  const double Y0 = 3.0;
  const CapacityResult cap = load_capacity(ops, Mode::Plastic, KMethod::ExactVertexEnumeration);
  const std::size_t m = ops.n_boundary_components();
  for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
    TractionField t = TractionField::zero(ops.dim(), ops.n_traction_facets());
    for (std::size_t j = 0; j < m; ++j) t.values[static_cast<Eigen::Index>(j)] = (mask >> j & 1u) ? -1.0 : 1.0;
    t.values *= 0.9 * cap.C * Y0;
    CHECK(optimal_stress(ops, t, Mode::Plastic).sigma_opt < Y0);
  }
  TractionField worst = cap.worst_traction;
  worst.values *= 1.1 * cap.C * Y0;
  CHECK(optimal_stress(ops, worst, Mode::Plastic).sigma_opt >= 1.1 * Y0 * (1.0 - 1e-6));
}

TEST_CASE("method names") {
  CHECK(to_string(KMethod::ExactVertexEnumeration) == "exact_vertex_enumeration");
  CHECK(to_string(KMethod::AlternatingHeuristic) == "alternating_heuristic");
}
