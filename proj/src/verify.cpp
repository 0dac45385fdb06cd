#include "loadcap/verify.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "loadcap/capacity.hpp"
#include "loadcap/errors.hpp"
#include "loadcap/kinematics.hpp"
#include "loadcap/lp.hpp"
#include "loadcap/stress.hpp"

namespace loadcap {

namespace {

class Tallies {
 public:
  CheckTally& at(const std::string& name) {
    auto it = index_.find(name);
    if (it == index_.end()) {
      index_.emplace(name, checks_.size());
      CheckTally c;
      c.name = name;
      checks_.push_back(std::move(c));
      return checks_.back();
    }
    return checks_[it->second];
  }

  /// Records one sample; `violation` <= 0 passes. Exceptions count as failures.
  void sample(const std::string& name, const std::string& label,
              const std::function<double()>& violation) {
    CheckTally& c = at(name);
    ++c.total;
    std::string failure;
    try {
      const double v = violation();
      if (std::isfinite(v)) c.worst = std::max(c.worst, v);
      if (v <= 0.0) {
        ++c.passed;
        return;
      }
      std::ostringstream os;
      os.precision(6);
      os << label << ": violation " << v;
      failure = os.str();
    } catch (const std::exception& e) {
      failure = label + ": " + e.what();
    }
    if (c.first_failure.empty()) c.first_failure = failure;
  }

  void skip(const std::string& name, const std::string& reason) {
    CheckTally& c = at(name);
    if (c.skipped.empty()) c.skipped = reason;
  }

  std::vector<CheckTally> take() { return std::move(checks_); }

 private:
  std::vector<CheckTally> checks_;
  std::map<std::string, std::size_t> index_;
};

double rel(double a, double b) { return std::abs(a - b) / (1.0 + std::abs(b)); }

TractionField random_traction(const DiscreteOperators& ops, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TractionField t = TractionField::zero(ops.dim(), ops.n_traction_facets());
  for (Eigen::Index i = 0; i < t.values.size(); ++i) t.values[i] = u(rng);
  return t;
}

lp::StandardForm random_lp(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> rows(1, 4);
  std::uniform_int_distribution<int> entry(-3, 3);
  std::uniform_int_distribution<int> kind(0, 2);
  const int m = rows(rng);
  const int n = std::uniform_int_distribution<int>(m + 1, 8)(rng);
  lp::StandardForm p;
  p.A.resize(m, n);
  p.b.resize(m);
  p.c.resize(n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) p.A(i, j) = entry(rng);
  }
  for (int j = 0; j < n; ++j) p.c[j] = entry(rng);
  if (kind(rng) == 0) {
    for (int i = 0; i < m; ++i) p.b[i] = entry(rng);
  } else {
    // feasible by construction
    Eigen::VectorXd x0(n);
    for (int j = 0; j < n; ++j) x0[j] = std::uniform_int_distribution<int>(0, 2)(rng);
    p.b = p.A * x0;
  }
  return p;
}

void elastic_or_plastic(Tallies& tally, const DiscreteOperators& ops, Mode mode,
                        std::mt19937_64& rng, int trials) {
  const std::string tag = std::string(to_string(mode)) + ".";
  const bool under_cap = ops.n_boundary_components() <= kEnumerationCap;

  double K = -1.0;
  if (under_cap) {
    tally.sample(tag + "K_dual_agreement", "sign patterns", [&] {
      K = generalized_K(ops, mode, KMethod::ExactVertexEnumeration).K;
      const double Kp = generalized_K_dual_check(ops, mode).K_prime;
      return std::abs(K - Kp) - 1e-6 * (1.0 + K);
    });
  } else {
    tally.skip(tag + "K_dual_agreement", "boundary components exceed the enumeration cap");
    tally.skip(tag + "K_bounds_K_t", "boundary components exceed the enumeration cap");
  }

  for (int k = 0; k < trials; ++k) {
    const TractionField t = random_traction(ops, rng);
    const std::string label = "trial " + std::to_string(k);
    const double tnorm = traction_sup_norm(ops, t);
    OptimalStressResult r;
    bool solved = false;
    tally.sample(tag + "duality_gap", label, [&] {
      r = optimal_stress(ops, t, mode);
      solved = true;
      return r.duality_gap - kDualityTol * (1.0 + r.sigma_opt);
    });
    if (!solved) continue;
    tally.sample(tag + "equilibrium", label, [&] {
      return check_equilibrium(ops, r.sigma_hat, t, 1e-8).residual - 1e-8 * (1.0 + tnorm);
    });
    tally.sample(tag + "attainment", label, [&] {
      return rel(stress_measure(r.sigma_hat, mode, ops.norm_pair()), r.sigma_opt) - 1e-7;
    });
    tally.sample(tag + "homogeneity", label, [&] {
      TractionField s = t;
      s.values *= 2.5;
      return rel(optimal_stress_primal(ops, s, mode).sigma_opt, 2.5 * r.sigma_opt) - 1e-7;
    });
    if (K >= 0.0) {
      tally.sample(tag + "K_bounds_K_t", label,
                   [&] { return r.sigma_opt / tnorm - K - 1e-6 * (1.0 + K); });
    }
    if (mode == Mode::Plastic) {
      const double Y0 = 1.0 + static_cast<double>(k % 3);
      tally.sample("plastic.limit_identities", label, [&] {
        const LimitResult lim = limit_analysis(ops, t, Y0);
        const double product = std::abs(lim.lambda_star * lim.sigma_opt - Y0) / Y0 - 1e-12;
        const double onto = std::abs(lim.sigma_opt_collapse - Y0) / Y0 - 1e-6;
        return std::max(product, onto);
      });
      tally.sample("plastic.kinematic_limit", label, [&] {
        const KinematicLimitCheck kin = kinematic_limit_check(ops, t, Y0);
        return kin.gap - 1e-6 * (1.0 + kin.lambda_static);
      });
    }
  }
}

}  // namespace

bool VerifyReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckTally& c) { return c.ok(); });
}

VerifyReport run_verify(const Mesh& mesh, std::uint64_t seed, int trials) {
  if (trials < 1) throw ValidationError("trials must be at least 1");
  const DiscreteOperators ops = assemble(mesh);
  const DiscreteOperators free_ops = assemble(mesh, NormPair::l1_linf(), Clamping::None);
  std::mt19937_64 rng(seed);
  Tallies tally;
  const int dim = mesh.dim;

  tally.sample("kinematics.rigid_kernel", "clamped", [&] {
    return static_cast<double>(rigid_kernel_dim(ops));
  });
  tally.sample("kinematics.rigid_kernel", "unclamped", [&] {
    const auto expected = static_cast<double>(dim * (dim + 1) / 2);
    return std::abs(static_cast<double>(rigid_kernel_dim(free_ops)) - expected);
  });

  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < trials; ++k) {
    double B[3][3];
    double a[3];
    for (int i = 0; i < 3; ++i) {
      a[i] = u(rng);
      for (int j = 0; j < 3; ++j) B[i][j] = u(rng);
    }
    tally.sample("kinematics.affine_strain", "trial " + std::to_string(k), [&] {
      const VelocityField w = free_ops.interpolate([&](const Point& x) {
        std::array<double, 3> v{};
        for (int i = 0; i < dim; ++i) {
          v[static_cast<std::size_t>(i)] = a[i];
          for (int j = 0; j < dim; ++j) v[static_cast<std::size_t>(i)] += B[i][j] * x[static_cast<std::size_t>(j)];
        }
        return v;
      });
      double err = 0.0;
      for (const SymMatrix& eps : strain(free_ops, w)) {
        for (int i = 0; i < dim; ++i) {
          for (int j = 0; j < dim; ++j) {
            err = std::max(err, std::abs(eps(i, j) - 0.5 * (B[i][j] + B[j][i])));
          }
        }
      }
      return err - 1e-12;
    });
  }

  elastic_or_plastic(tally, ops, Mode::Elastic, rng, trials);
  if (isochoric_dimension(ops) > 0) {
    elastic_or_plastic(tally, ops, Mode::Plastic, rng, trials);
  } else {
    for (const char* name : {"plastic.duality_gap", "plastic.limit_identities"}) {
      tally.skip(name, "isochoric subspace is trivial");
    }
  }

  for (int k = 0; k < trials; ++k) {
    const lp::StandardForm p = random_lp(rng);
    tally.sample("lp.oracle_agreement", "lp " + std::to_string(k), [&] {
      const lp::Solution s = lp::solve(p);
      const lp::Solution o = lp::solve_brute(p);
      if (s.status != o.status) return 1.0;
      if (s.status != lp::Status::Optimal) return 0.0;
      if (!lp::certificate_ok(p, s)) return 1.0;
      return rel(s.objective, o.objective) - 1e-7;
    });
  }

  VerifyReport out;
  out.seed = seed;
  out.trials = trials;
  out.checks = tally.take();
  return out;
}

}  // namespace loadcap
