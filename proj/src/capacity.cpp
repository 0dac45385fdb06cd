#include "loadcap/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>
#include <vector>

#include "kinematic_lp.hpp"
#include "loadcap/errors.hpp"

namespace loadcap {

namespace {

/// Runs fn(i) for i in [0, count) on the available hardware threads. Results
/// are written by index, so the outcome does not depend on scheduling.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < count; i += workers) fn(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void require_under_cap(const DiscreteOperators& ops) {
  const std::size_t m = ops.n_boundary_components();
  if (m > kEnumerationCap) {
    throw ValidationError("exact vertex enumeration is capped at " +
                          std::to_string(kEnumerationCap) +
                          " boundary velocity components; this mesh has " + std::to_string(m) +
                          " (use the heuristic method)");
  }
}

/// Sign traction for pattern index: component 0 is +1, component j > 0 is -1
/// when bit j-1 is set.
TractionField sign_traction(const DiscreteOperators& ops, std::size_t pattern) {
  TractionField t = TractionField::zero(ops.dim(), ops.n_traction_facets());
  for (Eigen::Index j = 0; j < t.values.size(); ++j) {
    const bool negative = j > 0 && ((pattern >> (j - 1)) & 1u);
    t.values[j] = negative ? -1.0 : 1.0;
  }
  return t;
}

std::size_t pattern_count(const DiscreteOperators& ops) {
  const std::size_t m = ops.n_boundary_components();
  return m == 0 ? 0 : std::size_t{1} << (m - 1);
}

/// Lowest index attaining the maximum.
std::size_t argmax(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

double positive_norm(const DiscreteOperators& ops, const TractionField& t) {
  const double n = traction_sup_norm(ops, t);
  if (!(n > 0.0)) throw ValidationError("traction field is zero");
  return n;
}

}  // namespace

std::string_view to_string(KMethod method) {
  return method == KMethod::ExactVertexEnumeration ? "exact_vertex_enumeration"
                                                   : "alternating_heuristic";
}

double concentration_factor_for(const DiscreteOperators& ops, const TractionField& t, Mode mode) {
  const double norm = positive_norm(ops, t);
  return optimal_stress(ops, t, mode).sigma_opt / norm;
}

CapacityResult generalized_K(const DiscreteOperators& ops, Mode mode, KMethod method) {
  if (mode == Mode::Plastic) require_plastic_viable(ops);
  CapacityResult out;
  out.mode = mode;
  out.method = method;
  out.worst_traction = TractionField::zero(ops.dim(), ops.n_traction_facets());
  out.certificate.dofs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ops.n_dof()));

  if (method == KMethod::ExactVertexEnumeration) {
    require_under_cap(ops);
    const std::size_t count = pattern_count(ops);
    if (count == 0) return out;
    std::vector<double> values(count);
    std::vector<VelocityField> witnesses(count);
    parallel_for(count, [&](std::size_t i) {
      auto r = optimal_stress_dual(ops, sign_traction(ops, i), mode);
      values[i] = r.value;
      witnesses[i] = std::move(r.witness);
    });
    const std::size_t best = argmax(values);
    out.K = values[best];
    out.worst_traction = sign_traction(ops, best);
    out.certificate = std::move(witnesses[best]);
    out.lp_solves = count;
    return out;
  }

  // Alternating heuristic: pattern <- sign(trace(witness)) until fixpoint.
  out.lower_bound = true;
  if (ops.n_boundary_components() == 0) return out;
  TractionField pattern = TractionField::zero(ops.dim(), ops.n_traction_facets());
  pattern.values.setOnes();
  bool converged = false;
  for (int it = 0; it < kHeuristicIterationCap; ++it) {
    auto r = optimal_stress_dual(ops, pattern, mode);
    ++out.lp_solves;
    if (out.lp_solves == 1 || r.value > out.K) {
      out.K = r.value;
      out.worst_traction = pattern;
      out.certificate = r.witness;
    }
    const TractionField tr = trace(ops, r.witness);
    TractionField next = pattern;
    for (Eigen::Index j = 0; j < next.values.size(); ++j) {
      if (tr.values[j] > 0.0) next.values[j] = 1.0;
      if (tr.values[j] < 0.0) next.values[j] = -1.0;
    }
    if (next.values == pattern.values) {
      converged = true;
      break;
    }
    pattern = std::move(next);
  }
  out.iteration_cap_hit = !converged;
  return out;
}

DualCheckResult generalized_K_dual_check(const DiscreteOperators& ops, Mode mode) {
  if (mode == Mode::Plastic) require_plastic_viable(ops);
  require_under_cap(ops);
  DualCheckResult out;
  out.argmax = TractionField::zero(ops.dim(), ops.n_traction_facets());
  const std::size_t count = pattern_count(ops);
  if (count == 0) return out;
  std::vector<double> values(count);
  parallel_for(count, [&](std::size_t i) {
    values[i] = optimal_stress_primal(ops, sign_traction(ops, i), mode).sigma_opt;
  });
  const std::size_t best = argmax(values);
  out.K_prime = values[best];
  out.argmax = sign_traction(ops, best);
  return out;
}

CapacityResult load_capacity(const DiscreteOperators& ops, Mode mode, KMethod method) {
  CapacityResult r = generalized_K(ops, mode, method);
  r.C = r.K > 1e-12 ? 1.0 / r.K : std::numeric_limits<double>::infinity();
  return r;
}

TractionField project_to_collapse(const DiscreteOperators& ops, const TractionField& t,
                                  double Y0) {
  return limit_analysis(ops, t, Y0).t_collapse;
}

LimitResult limit_analysis(const DiscreteOperators& ops, const TractionField& t, double Y0) {
  if (!(Y0 > 0.0) || !std::isfinite(Y0)) {
    throw ValidationError("yield stress Y0 must be positive and finite");
  }
  const double norm = positive_norm(ops, t);
  require_plastic_viable(ops);
  LimitResult out;
  out.Y0 = Y0;
  out.sigma_opt = optimal_stress(ops, t, Mode::Plastic).sigma_opt;
  if (!(out.sigma_opt > 1e-12 * norm)) {
    throw ValidationError(
        "the traction does no work on any isochoric field; it is carried by pressure alone "
        "and has no collapse load");
  }
  out.lambda_star = Y0 / out.sigma_opt;
  TractionField tc = t;
  tc.values *= out.lambda_star;
  out.t_collapse = std::move(tc);
  out.sigma_opt_collapse = optimal_stress(ops, out.t_collapse, Mode::Plastic).sigma_opt;
  if (std::abs(out.sigma_opt_collapse - Y0) > kDualityTol * Y0) {
    std::ostringstream os;
    os.precision(17);
    os << "projected traction has sigma_opt " << out.sigma_opt_collapse << ", expected Y0 = " << Y0;
    throw SolverError(os.str());
  }
  return out;
}

KinematicLimitCheck kinematic_limit_check(const DiscreteOperators& ops, const TractionField& t,
                                          double Y0) {
  const LimitResult stat = limit_analysis(ops, t, Y0);

  lp::LinearProgram prog(lp::LinearProgram::Sense::Minimize);
  auto field = detail::add_kinematic_field(prog, ops, Mode::Plastic);
  for (const auto& [var, weight] : field.measure) prog.set_cost(var, weight);
  const Eigen::VectorXd f = load_vector(ops, t);
  lp::LinearProgram::Terms work;
  for (std::size_t k = 0; k < field.w.size(); ++k) {
    const double a = f[static_cast<Eigen::Index>(k)];
    if (a != 0.0) work.emplace_back(field.w[k], a);
  }
  prog.add_row(std::move(work), lp::LinearProgram::Row::Equal, 1.0);
  const auto res = prog.solve();
  if (res.status == lp::Status::Infeasible) {
    throw ValidationError("no isochoric field does work against this traction");
  }
  if (res.status != lp::Status::Optimal) {
    throw SolverError("kinematic limit LP is " + std::string(lp::to_string(res.status)));
  }

  KinematicLimitCheck out;
  out.lambda_static = stat.lambda_star;
  out.lambda_kinematic = Y0 * res.objective;
  out.gap = std::abs(out.lambda_static - out.lambda_kinematic);
  out.mechanism.dofs.resize(static_cast<Eigen::Index>(field.w.size()));
  for (std::size_t k = 0; k < field.w.size(); ++k) {
    out.mechanism.dofs[static_cast<Eigen::Index>(k)] =
        res.values[static_cast<Eigen::Index>(field.w[k])];
  }
  if (out.gap > kDualityTol * (1.0 + out.lambda_static)) {
    std::ostringstream os;
    os.precision(17);
    os << "static limit factor " << out.lambda_static << " and kinematic limit factor "
       << out.lambda_kinematic << " disagree";
    throw SolverError(os.str());
  }
  return out;
}

}  // namespace loadcap
