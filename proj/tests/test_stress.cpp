#include <doctest.h>

#include <cmath>
#include <random>

#include "loadcap/errors.hpp"
#include "loadcap/kinematics.hpp"
#include "loadcap/mesh.hpp"
#include "loadcap/stress.hpp"
#include "oracles.hpp"

using namespace loadcap;

namespace {

TractionField uniform(const DiscreteOperators& ops, std::initializer_list<double> v) {
  TractionField t = TractionField::zero(ops.dim(), ops.n_traction_facets());
  for (std::size_t f = 0; f < ops.n_traction_facets(); ++f) {
    int c = 0;
    for (double x : v) t.values[static_cast<Eigen::Index>(f) * ops.dim() + c++] = x;
  }
  return t;
}

TractionField random_traction(const DiscreteOperators& ops, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TractionField t = TractionField::zero(ops.dim(), ops.n_traction_facets());
  for (Eigen::Index i = 0; i < t.values.size(); ++i) t.values[i] = u(rng);
  return t;
}

StressField bar_stress(double s) {
  SymMatrix m(1);
  m[0] = s;
  return {{m}, {}};
}

void check_optimum(const DiscreteOperators& ops, const TractionField& t, Mode mode) {
  const OptimalStressResult r = optimal_stress(ops, t, mode);
  const double tn = traction_sup_norm(ops, t);
  CHECK(r.duality_gap <= 1e-6 * (1.0 + r.sigma_opt));
  CHECK(check_equilibrium(ops, r.sigma_hat, t, 1e-8).residual <= 1e-8 * (1.0 + tn));
  CHECK(std::abs(stress_measure(r.sigma_hat, mode) - r.sigma_opt) <= 1e-7 * (1.0 + r.sigma_opt));
  const double kn = kinematic_norm(ops, r.dual_witness, mode);
  CHECK(kn == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(external_work(ops, t, r.dual_witness) / kn == doctest::Approx(r.dual_value).epsilon(1e-8));
}

}  // namespace

TEST_CASE("stress measure") {
  StressField s;
  s.stresses = {SymMatrix::diagonal(3.0, 0.0, 0.0)};
  CHECK(stress_measure(s, Mode::Elastic) == doctest::Approx(3.0));
  CHECK(stress_measure(s, Mode::Plastic) == doctest::Approx(2.0));
  s.stresses = {5.0 * SymMatrix::identity(3), SymMatrix(3)};
  CHECK(stress_measure(s, Mode::Plastic) == doctest::Approx(0.0));
  // 2D with out-of-plane component completing a spherical state
  StressField p;
  p.stresses = {4.0 * SymMatrix::identity(2)};
  p.out_of_plane = {4.0};
  CHECK(stress_measure(p, Mode::Plastic) == doctest::Approx(0.0));
  CHECK(p.full(0)(2, 2) == 4.0);
  CHECK(stress_measure(StressField{{SymMatrix(2)}, {}}, Mode::Elastic) == 0.0);
}

TEST_CASE("equilibrium on a single bar") {
  const DiscreteOperators ops = assemble(generate_bar(1.0, 1.0, 1));
  TractionField t = TractionField::zero(1, 1);
  t.values[0] = 1.0;
  auto ok = check_equilibrium(ops, bar_stress(1.0), t, 1e-12);
  CHECK(ok.ok);
  CHECK(ok.residual == doctest::Approx(0.0));
  auto bad = check_equilibrium(ops, bar_stress(2.0), t, 1e-12);
  CHECK_FALSE(bad.ok);
  CHECK(bad.residual == doctest::Approx(1.0));
  CHECK(check_equilibrium(ops, bar_stress(0.0), TractionField::zero(1, 1), 1e-12).ok);
}

TEST_CASE("bar optimal stress") {
  const DiscreteOperators ops = assemble(generate_bar(1.0, 1.0, 1));
  TractionField t = TractionField::zero(1, 1);
  t.values[0] = 1.0;
  const OptimalStressResult r = optimal_stress(ops, t, Mode::Elastic);
  CHECK(r.sigma_opt == doctest::Approx(1.0));
  CHECK(r.dual_value == doctest::Approx(1.0));
  CHECK(r.duality_gap <= 1e-12);
  CHECK(r.sigma_hat.stresses[0][0] == doctest::Approx(1.0));
  CHECK(std::abs(r.dual_witness.dofs[0]) == doctest::Approx(1.0));
  t.values[0] = -2.0;
  CHECK(optimal_stress_primal(ops, t, Mode::Elastic).sigma_opt == doctest::Approx(2.0));
  CHECK(optimal_stress_dual(ops, t, Mode::Elastic).value == doctest::Approx(2.0));
  const OptimalStressResult z = optimal_stress(ops, TractionField::zero(1, 1), Mode::Elastic);
  CHECK(z.sigma_opt == doctest::Approx(0.0));
  CHECK(z.dual_value == doctest::Approx(0.0));
}

TEST_CASE("plastic mode is rejected without isochoric fields") {
  const DiscreteOperators ops = assemble(generate_bar(1.0, 1.0, 3));
  TractionField t = TractionField::zero(1, 1);
  t.values[0] = 1.0;
  CHECK_THROWS_WITH_AS(optimal_stress(ops, t, Mode::Plastic), doctest::Contains("isochoric"),
                       ValidationError);
}

TEST_CASE("reference values from an independent discretization") {
  const DiscreteOperators r21 = assemble(read_mesh(oracle::data_path("rect_2x1.json")));
  const TractionField t21 = read_traction(oracle::data_path("rect_2x1.traction.json"), r21);
  CHECK(optimal_stress(r21, t21, Mode::Elastic).sigma_opt == doctest::Approx(2.5).epsilon(1e-9));
  CHECK(optimal_stress(r21, t21, Mode::Plastic).sigma_opt ==
        doctest::Approx(0.7833333333333334).epsilon(1e-9));

  const DiscreteOperators tet = assemble(read_mesh(oracle::data_path("two_tet.json")));
  const TractionField tt = read_traction(oracle::data_path("two_tet.traction.json"), tet);
  CHECK(optimal_stress(tet, tt, Mode::Elastic).sigma_opt == doctest::Approx(3.553418012614796).epsilon(1e-9));
  CHECK(optimal_stress(tet, tt, Mode::Plastic).sigma_opt == doctest::Approx(3.553418012614795).epsilon(1e-9));

  const DiscreteOperators r11 = assemble(read_mesh(oracle::data_path("rect_1x1.json")));
  TractionField shear = TractionField::zero(2, 3);
  shear.values[1] = -1.0;
  CHECK(optimal_stress(r11, shear, Mode::Elastic).sigma_opt == doctest::Approx(1.0));
  CHECK(optimal_stress(r11, shear, Mode::Plastic).sigma_opt == doctest::Approx(1.0));
}

TEST_CASE("LP optimum matches vertex enumeration of the kinematic ball") {
  std::mt19937_64 rng(77);
  for (const auto& mesh : {generate_rectangle(1.0, 1.0, 1, 1, Edge::Left, Edge::Right),
                           generate_rectangle(2.0, 1.0, 2, 1, Edge::Left, Edge::Right),
                           generate_rectangle(1.0, 2.0, 1, 2, Edge::Bottom, Edge::Top),
                           generate_bar(2.0, 1.5, 3)}) {
    const DiscreteOperators ops = assemble(mesh);
    for (int k = 0; k < 4; ++k) {
      const TractionField t = random_traction(ops, rng);
      CHECK(optimal_stress(ops, t, Mode::Elastic).sigma_opt ==
            doctest::Approx(oracle::sigma_opt(ops, t, Mode::Elastic)).epsilon(1e-8));
      if (mesh.dim == 2) {
        CHECK(optimal_stress(ops, t, Mode::Plastic).sigma_opt ==
              doctest::Approx(oracle::sigma_opt(ops, t, Mode::Plastic)).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("duality, representation and attainment on random instances") {
  std::mt19937_64 rng(9);
  const Mesh tet = read_mesh(oracle::data_path("two_tet.json"));
  for (const auto& mesh : {generate_rectangle(2.0, 2.0, 2, 2, Edge::Left, Edge::Right),
                           generate_rectangle(3.0, 1.0, 3, 1, Edge::Bottom, Edge::Left), tet}) {
    const DiscreteOperators ops = assemble(mesh);
    for (int k = 0; k < 3; ++k) {
      const TractionField t = random_traction(ops, rng);
      check_optimum(ops, t, Mode::Elastic);
      check_optimum(ops, t, Mode::Plastic);
    }
  }
}

TEST_CASE("homogeneity and sign symmetry") {
  const DiscreteOperators ops = assemble(generate_rectangle(2.0, 1.0, 2, 1, Edge::Left, Edge::Right));
  const TractionField t = uniform(ops, {0.4, -1.0});
  for (Mode mode : {Mode::Elastic, Mode::Plastic}) {
    const double s = optimal_stress(ops, t, mode).sigma_opt;
    TractionField t3 = t;
    t3.values *= 3.0;
    CHECK(optimal_stress(ops, t3, mode).sigma_opt == doctest::Approx(3.0 * s).epsilon(1e-9));
    TractionField neg = t;
    neg.values *= -1.0;
    CHECK(optimal_stress_dual(ops, neg, mode).value == doctest::Approx(s).epsilon(1e-9));
  }
}

TEST_CASE("mode names") {
  CHECK(parse_mode("elastic") == Mode::Elastic);
  CHECK(parse_mode("plastic") == Mode::Plastic);
  CHECK(to_string(Mode::Plastic) == "plastic");
  CHECK_THROWS(parse_mode("viscous"));
}
