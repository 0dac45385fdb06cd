#include "loadcap/stress.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "loadcap/errors.hpp"
#include "loadcap/linear_program.hpp"
#include "kinematic_lp.hpp"

namespace loadcap {

namespace {

using lp::LinearProgram;
using Row = LinearProgram::Row;

/// Non-zero entries of each strain-matrix row, indexed by DOF.
LinearProgram::Terms row_terms(const Eigen::MatrixXd& m, Eigen::Index row,
                               const std::vector<std::size_t>& var_of_dof, double scale = 1.0) {
  LinearProgram::Terms terms;
  for (Eigen::Index k = 0; k < m.cols(); ++k) {
    const double a = m(row, k);
    if (a != 0.0) terms.emplace_back(var_of_dof[static_cast<std::size_t>(k)], scale * a);
  }
  return terms;
}

void check_shapes(const DiscreteOperators& ops, const TractionField& t) {
  if (t.dim != ops.dim() ||
      static_cast<std::size_t>(t.values.size()) != ops.n_boundary_components()) {
    throw std::invalid_argument("traction field does not match the gammaT facets");
  }
}

}  // namespace

namespace detail {

KinematicVariables add_kinematic_field(LinearProgram& prog, const DiscreteOperators& ops,
                                       Mode mode) {
  const int dim = ops.dim();
  const std::size_t nc = ops.n_components();
  const Eigen::MatrixXd& E = ops.strain_matrix();
  KinematicVariables out;
  out.w.resize(ops.n_dof());
  for (auto& v : out.w) v = prog.add_free();

  // entry = p - q with p, q >= 0; the measure charges weight * (p + q)
  auto split_entry = [&](LinearProgram::Terms terms, double weight) {
    const std::size_t p = prog.add_nonnegative();
    const std::size_t q = prog.add_nonnegative();
    terms.emplace_back(p, -1.0);
    terms.emplace_back(q, 1.0);
    prog.add_row(std::move(terms), Row::Equal, 0.0);
    out.measure.emplace_back(p, weight);
    out.measure.emplace_back(q, weight);
  };

  for (std::size_t e = 0; e < ops.n_elements(); ++e) {
    const double vol = ops.volumes()[static_cast<Eigen::Index>(e)];
    const auto row0 = static_cast<Eigen::Index>(e * nc);
    if (mode == Mode::Elastic) {
      for (std::size_t c = 0; c < nc; ++c) {
        split_entry(row_terms(E, row0 + static_cast<Eigen::Index>(c), out.w),
                    vol * SymMatrix::multiplicity(dim, c));
      }
      continue;
    }
    // isochoric: trace of the element strain vanishes
    LinearProgram::Terms trace_terms;
    for (int i = 0; i < dim; ++i) {
      auto terms = row_terms(E, row0 + i, out.w);
      trace_terms.insert(trace_terms.end(), terms.begin(), terms.end());
    }
    prog.add_row(std::move(trace_terms), Row::Equal, 0.0);
    // yield dual: diagonal of the 3x3 embedding shifted by a free spherical part
    const std::size_t shift = prog.add_free();
    for (int i = 0; i < 3; ++i) {
      LinearProgram::Terms terms;
      if (i < dim) terms = row_terms(E, row0 + i, out.w);
      terms.emplace_back(shift, 1.0);
      split_entry(std::move(terms), vol);
    }
    for (std::size_t c = static_cast<std::size_t>(dim); c < nc; ++c) {
      split_entry(row_terms(E, row0 + static_cast<Eigen::Index>(c), out.w), 2.0 * vol);
    }
  }
  return out;
}

}  // namespace detail

std::string_view to_string(Mode mode) { return mode == Mode::Elastic ? "elastic" : "plastic"; }

Mode parse_mode(std::string_view text) {
  if (text == "elastic") return Mode::Elastic;
  if (text == "plastic") return Mode::Plastic;
  throw std::invalid_argument("unknown mode '" + std::string(text) +
                              "' (allowed: elastic, plastic)");
}

SymMatrix StressField::full(std::size_t e) const {
  SymMatrix m = embed3(stresses.at(e));
  if (!out_of_plane.empty()) m.at(2, 2) = out_of_plane.at(e);
  return m;
}

double stress_measure(const StressField& s, Mode mode, NormPair norms) {
  double acc = 0.0;
  for (std::size_t e = 0; e < s.stresses.size(); ++e) {
    const double v = mode == Mode::Elastic ? mat_norm(s.stresses[e], norms.dual)
                                           : yield_value(s.full(e), norms.dual);
    acc = std::max(acc, v);
  }
  return acc;
}

double kinematic_norm(const DiscreteOperators& ops, const VelocityField& w, Mode mode) {
  return mode == Mode::Elastic ? strain_norm_l1(ops, w) : deviatoric_strain_norm(ops, w);
}

EquilibriumCheck check_equilibrium(const DiscreteOperators& ops, const StressField& s,
                                   const TractionField& t, double tol) {
  check_shapes(ops, t);
  if (s.stresses.size() != ops.n_elements()) {
    throw std::invalid_argument("stress field has " + std::to_string(s.stresses.size()) +
                                " elements, mesh has " + std::to_string(ops.n_elements()));
  }
  const std::size_t nc = ops.n_components();
  Eigen::VectorXd weighted(static_cast<Eigen::Index>(ops.n_elements() * nc));
  for (std::size_t e = 0; e < ops.n_elements(); ++e) {
    if (s.stresses[e].dim() != ops.dim()) {
      throw std::invalid_argument("stress dimension does not match the mesh");
    }
    for (std::size_t c = 0; c < nc; ++c) {
      weighted[static_cast<Eigen::Index>(e * nc + c)] =
          ops.volumes()[static_cast<Eigen::Index>(e)] * SymMatrix::multiplicity(ops.dim(), c) *
          s.stresses[e][c];
    }
  }
  const Eigen::VectorXd internal = ops.strain_matrix().transpose() * weighted;
  const Eigen::VectorXd external = load_vector(ops, t);
  EquilibriumCheck out;
  out.residual = internal.size() ? (internal - external).lpNorm<Eigen::Infinity>() : 0.0;
  out.ok = out.residual <= tol * (1.0 + traction_sup_norm(ops, t));
  return out;
}

void require_plastic_viable(const DiscreteOperators& ops) {
  if (isochoric_dimension(ops) == 0) {
    throw ValidationError(
        "plastic mode needs a nontrivial isochoric subspace, but every admissible field of "
        "this mesh with traceless strain vanishes (e.g. bar meshes)");
  }
}

PrimalResult optimal_stress_primal(const DiscreteOperators& ops, const TractionField& t,
                                   Mode mode) {
  check_shapes(ops, t);
  if (mode == Mode::Plastic) require_plastic_viable(ops);
  const int dim = ops.dim();
  const std::size_t nc = ops.n_components();
  const std::size_t n_el = ops.n_elements();
  const bool plane_plastic = mode == Mode::Plastic && dim == 2;

  LinearProgram prog(LinearProgram::Sense::Minimize);
  std::vector<std::size_t> sigma(n_el * nc);
  for (auto& v : sigma) v = prog.add_free();
  std::vector<std::size_t> s33;
  if (plane_plastic) {
    s33.resize(n_el);
    for (auto& v : s33) v = prog.add_free();
  }
  const std::size_t bound = prog.add_nonnegative(1.0);

  // equilibrium: one row per free DOF
  const Eigen::VectorXd f = load_vector(ops, t);
  const Eigen::MatrixXd& E = ops.strain_matrix();
  for (Eigen::Index k = 0; k < E.cols(); ++k) {
    LinearProgram::Terms terms;
    for (Eigen::Index r = 0; r < E.rows(); ++r) {
      const double a = E(r, k);
      if (a == 0.0) continue;
      const auto e = static_cast<std::size_t>(r) / nc;
      const auto c = static_cast<std::size_t>(r) % nc;
      terms.emplace_back(sigma[static_cast<std::size_t>(r)],
                         ops.volumes()[static_cast<Eigen::Index>(e)] *
                             SymMatrix::multiplicity(dim, c) * a);
    }
    prog.add_row(std::move(terms), Row::Equal, f[k]);
  }

  auto bound_both = [&](LinearProgram::Terms terms) {
    LinearProgram::Terms neg = terms;
    for (auto& [v, a] : neg) a = -a;
    terms.emplace_back(bound, -1.0);
    neg.emplace_back(bound, -1.0);
    prog.add_row(std::move(terms), Row::LessEqual, 0.0);
    prog.add_row(std::move(neg), Row::LessEqual, 0.0);
  };

  for (std::size_t e = 0; e < n_el; ++e) {
    if (mode == Mode::Elastic) {
      // entrywise-inf: every unique component, off-diagonals bounded once
      for (std::size_t c = 0; c < nc; ++c) bound_both({{sigma[e * nc + c], 1.0}});
      continue;
    }
    // deviatoric diagonal: d_i - (d_0 + d_1 + d_2) / 3, spherical part free
    std::vector<std::size_t> diag;
    for (int i = 0; i < dim; ++i) diag.push_back(sigma[e * nc + static_cast<std::size_t>(i)]);
    if (plane_plastic) diag.push_back(s33[e]);
    for (std::size_t i = 0; i < 3; ++i) {
      LinearProgram::Terms terms;
      for (std::size_t j = 0; j < diag.size(); ++j) {
        terms.emplace_back(diag[j], (i == j ? 1.0 : 0.0) - 1.0 / 3.0);
      }
      bound_both(std::move(terms));
    }
    for (std::size_t c = static_cast<std::size_t>(dim); c < nc; ++c) {
      bound_both({{sigma[e * nc + c], 1.0}});
    }
  }

  const auto res = prog.solve();
  if (res.status != lp::Status::Optimal) {
    throw SolverError("optimal stress LP is " + std::string(lp::to_string(res.status)) +
                      "; the traction cannot be balanced");
  }
  PrimalResult out;
  out.sigma_opt = std::max(0.0, res.values[static_cast<Eigen::Index>(bound)]);
  out.sigma_hat.stresses.reserve(n_el);
  for (std::size_t e = 0; e < n_el; ++e) {
    SymMatrix m(dim);
    for (std::size_t c = 0; c < nc; ++c) {
      m[c] = res.values[static_cast<Eigen::Index>(sigma[e * nc + c])];
    }
    out.sigma_hat.stresses.push_back(m);
    if (plane_plastic) {
      out.sigma_hat.out_of_plane.push_back(res.values[static_cast<Eigen::Index>(s33[e])]);
    }
  }
  return out;
}

DualResult optimal_stress_dual(const DiscreteOperators& ops, const TractionField& t,
                               Mode mode) {
  check_shapes(ops, t);
  if (mode == Mode::Plastic) require_plastic_viable(ops);
  LinearProgram prog(LinearProgram::Sense::Maximize);
  auto field = detail::add_kinematic_field(prog, ops, mode);
  const Eigen::VectorXd f = load_vector(ops, t);
  for (std::size_t k = 0; k < field.w.size(); ++k) {
    prog.set_cost(field.w[k], f[static_cast<Eigen::Index>(k)]);
  }
  prog.add_row(std::move(field.measure), Row::LessEqual, 1.0);

  const auto res = prog.solve();
  if (res.status == lp::Status::Unbounded) {
    throw SolverError("kinematic LP is unbounded: the mesh admits a mechanism");
  }
  if (res.status != lp::Status::Optimal) {
    throw SolverError("kinematic LP is " + std::string(lp::to_string(res.status)));
  }
  DualResult out;
  out.value = std::max(0.0, res.objective);
  out.witness.dofs.resize(static_cast<Eigen::Index>(field.w.size()));
  for (std::size_t k = 0; k < field.w.size(); ++k) {
    out.witness.dofs[static_cast<Eigen::Index>(k)] =
        res.values[static_cast<Eigen::Index>(field.w[k])];
  }
  return out;
}

OptimalStressResult optimal_stress(const DiscreteOperators& ops, const TractionField& t,
                                   Mode mode) {
  PrimalResult primal = optimal_stress_primal(ops, t, mode);
  DualResult dual = optimal_stress_dual(ops, t, mode);
  OptimalStressResult out;
  out.mode = mode;
  out.sigma_opt = primal.sigma_opt;
  out.sigma_hat = std::move(primal.sigma_hat);
  out.dual_value = dual.value;
  out.dual_witness = std::move(dual.witness);
  out.duality_gap = std::abs(out.sigma_opt - out.dual_value);
  if (out.duality_gap > kDualityTol * (1.0 + out.sigma_opt)) {
    std::ostringstream os;
    os.precision(17);
    os << "solver inconsistency: primal optimum " << out.sigma_opt << " and kinematic optimum "
       << out.dual_value << " differ by " << out.duality_gap;
    throw SolverError(os.str());
  }
  return out;
}

}  // namespace loadcap
