#include "loadcap/kinematics.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "loadcap/errors.hpp"

namespace loadcap {

namespace {

double facet_measure(const Mesh& mesh, const Facet& facet) {
  const auto& x = mesh.nodes;
  const auto& n = facet.nodes;
  switch (mesh.dim) {
    case 1:
      // a bar end: the cross-section of the bar that owns it
      for (const Element& e : mesh.elements) {
        if (e.nodes[0] == n[0] || e.nodes[1] == n[0]) return e.area;
      }
      return 0.0;
    case 2:
      return std::hypot(x[n[1]][0] - x[n[0]][0], x[n[1]][1] - x[n[0]][1]);
    default: {
      Eigen::Vector3d a, b;
      for (int c = 0; c < 3; ++c) {
        a[c] = x[n[1]][static_cast<std::size_t>(c)] - x[n[0]][static_cast<std::size_t>(c)];
        b[c] = x[n[2]][static_cast<std::size_t>(c)] - x[n[0]][static_cast<std::size_t>(c)];
      }
      return 0.5 * a.cross(b).norm();
    }
  }
}

void check_length(const DiscreteOperators& ops, const VelocityField& w) {
  if (static_cast<std::size_t>(w.dofs.size()) != ops.n_dof()) {
    throw std::invalid_argument("velocity field has " + std::to_string(w.dofs.size()) +
                                " DOFs, operators expect " + std::to_string(ops.n_dof()));
  }
}

void check_traction(const DiscreteOperators& ops, const TractionField& t) {
  if (t.dim != ops.dim() ||
      static_cast<std::size_t>(t.values.size()) != ops.n_boundary_components()) {
    throw std::invalid_argument("traction field shape does not match the gammaT facets");
  }
}

}  // namespace

DiscreteOperators assemble(const Mesh& mesh, NormPair norms, Clamping clamping) {
  require_valid(mesh);
  if (norms != NormPair::l1_linf()) {
    throw std::invalid_argument("only the (l1 strain, linf stress) norm pair is supported");
  }
  DiscreteOperators ops;
  ops.mesh_ = std::make_shared<const Mesh>(mesh);
  ops.norms_ = norms;
  ops.clamping_ = clamping;

  const int dim = mesh.dim;
  std::vector<bool> clamped(mesh.nodes.size(), false);
  if (clamping == Clamping::Gamma0) {
    for (const Facet& f : mesh.facets) {
      if (f.label != FacetLabel::Gamma0) continue;
      for (std::size_t n : f.nodes) clamped[n] = true;
    }
  }
  ops.node_dof_.assign(mesh.nodes.size(), -1);
  long next = 0;
  for (std::size_t n = 0; n < mesh.nodes.size(); ++n) {
    if (clamped[n]) continue;
    ops.node_dof_[n] = next;
    next += dim;
  }
  ops.n_dof_ = static_cast<std::size_t>(next);

  const std::size_t nc = SymMatrix::component_count(dim);
  const auto n_el = mesh.elements.size();
  ops.strain_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_el * nc),
                                      static_cast<Eigen::Index>(ops.n_dof_));
  ops.volumes_.resize(static_cast<Eigen::Index>(n_el));

  for (std::size_t e = 0; e < n_el; ++e) {
    const Element& el = mesh.elements[e];
    const auto& x = mesh.nodes;
    // columns of `edges` are x_a - x_0; rows of its inverse are grad(lambda_a)
    Eigen::MatrixXd edges(dim, dim);
    for (int a = 0; a < dim; ++a) {
      for (int c = 0; c < dim; ++c) {
        edges(c, a) = x[el.nodes[static_cast<std::size_t>(a + 1)]][static_cast<std::size_t>(c)] -
                      x[el.nodes[0]][static_cast<std::size_t>(c)];
      }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(edges);
    if (!lu.isInvertible()) {
      throw ValidationError("element " + std::to_string(e) + " has singular geometry");
    }
    const Eigen::MatrixXd inv = lu.inverse();
    Eigen::MatrixXd grads(dim + 1, dim);
    grads.bottomRows(dim) = inv;
    grads.row(0) = -inv.colwise().sum();

    for (std::size_t comp = 0; comp < nc; ++comp) {
      const auto [i, j] = SymMatrix::position(dim, comp);
      const auto row = static_cast<Eigen::Index>(e * nc + comp);
      for (std::size_t a = 0; a < el.nodes.size(); ++a) {
        const long base = ops.node_dof_[el.nodes[a]];
        if (base < 0) continue;
        const auto ai = static_cast<Eigen::Index>(a);
        // eps_ij = (d_j w_i + d_i w_j) / 2
        ops.strain_(row, base + i) += 0.5 * grads(ai, j);
        ops.strain_(row, base + j) += 0.5 * grads(ai, i);
      }
    }
    double vol = element_measure(mesh, el);
    if (el.kind == ElementKind::Bar) vol *= el.area;
    ops.volumes_[static_cast<Eigen::Index>(e)] = vol;
  }

  ops.traction_facets_ = mesh.facets_with(FacetLabel::GammaT);
  const auto n_tf = ops.traction_facets_.size();
  ops.trace_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_tf * static_cast<std::size_t>(dim)),
                                     static_cast<Eigen::Index>(ops.n_dof_));
  ops.areas_.resize(static_cast<Eigen::Index>(n_tf));
  for (std::size_t k = 0; k < n_tf; ++k) {
    const Facet& f = mesh.facets[ops.traction_facets_[k]];
    const double share = 1.0 / static_cast<double>(f.nodes.size());
    for (std::size_t n : f.nodes) {
      const long base = ops.node_dof_[n];
      if (base < 0) continue;
      for (int c = 0; c < dim; ++c) {
        ops.trace_(static_cast<Eigen::Index>(k) * dim + c, base + c) += share;
      }
    }
    ops.areas_[static_cast<Eigen::Index>(k)] = facet_measure(mesh, f);
  }
  return ops;
}

std::vector<SymMatrix> strain(const DiscreteOperators& ops, const VelocityField& w) {
  check_length(ops, w);
  const Eigen::VectorXd all = ops.strain_matrix() * w.dofs;
  const std::size_t nc = ops.n_components();
  std::vector<SymMatrix> out;
  out.reserve(ops.n_elements());
  for (std::size_t e = 0; e < ops.n_elements(); ++e) {
    SymMatrix m(ops.dim());
    for (std::size_t c = 0; c < nc; ++c) m[c] = all[static_cast<Eigen::Index>(e * nc + c)];
    out.push_back(m);
  }
  return out;
}

double strain_norm_l1(const DiscreteOperators& ops, const VelocityField& w) {
  const auto eps = strain(ops, w);
  double acc = 0.0;
  for (std::size_t e = 0; e < eps.size(); ++e) {
    acc += ops.volumes()[static_cast<Eigen::Index>(e)] * mat_norm(eps[e], ops.norm_pair().primal);
  }
  return acc;
}

double deviatoric_strain_norm(const DiscreteOperators& ops, const VelocityField& w) {
  const auto eps = strain(ops, w);
  double acc = 0.0;
  for (std::size_t e = 0; e < eps.size(); ++e) {
    acc += ops.volumes()[static_cast<Eigen::Index>(e)] *
           yield_dual_value(eps[e], ops.norm_pair().primal);
  }
  return acc;
}

TractionField trace(const DiscreteOperators& ops, const VelocityField& w) {
  check_length(ops, w);
  return {ops.dim(), ops.trace_matrix() * w.dofs};
}

double trace_norm_l1(const DiscreteOperators& ops, const VelocityField& w) {
  const TractionField tr = trace(ops, w);
  double acc = 0.0;
  for (std::size_t f = 0; f < tr.facet_count(); ++f) {
    const Eigen::VectorXd v = tr.facet(f);
    acc += ops.areas()[static_cast<Eigen::Index>(f)] *
           vec_norm({v.data(), static_cast<std::size_t>(v.size())}, ops.norm_pair().primal);
  }
  return acc;
}

Eigen::VectorXd load_vector(const DiscreteOperators& ops, const TractionField& t) {
  check_traction(ops, t);
  Eigen::VectorXd weighted = t.values;
  for (std::size_t f = 0; f < t.facet_count(); ++f) {
    weighted.segment(static_cast<Eigen::Index>(f) * t.dim, t.dim) *=
        ops.areas()[static_cast<Eigen::Index>(f)];
  }
  return ops.trace_matrix().transpose() * weighted;
}

double external_work(const DiscreteOperators& ops, const TractionField& t,
                     const VelocityField& w) {
  check_length(ops, w);
  return load_vector(ops, t).dot(w.dofs);
}

double traction_sup_norm(const DiscreteOperators& ops, const TractionField& t) {
  check_traction(ops, t);
  double acc = 0.0;
  for (std::size_t f = 0; f < t.facet_count(); ++f) {
    const Eigen::VectorXd v = t.facet(f);
    acc = std::max(acc, vec_norm({v.data(), static_cast<std::size_t>(v.size())},
                                 ops.norm_pair().dual));
  }
  return acc;
}

Eigen::MatrixXd isochoric_constraints(const DiscreteOperators& ops) {
  const auto n_el = static_cast<Eigen::Index>(ops.n_elements());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n_el, static_cast<Eigen::Index>(ops.n_dof()));
  for (Eigen::Index e = 0; e < n_el; ++e) {
    const auto rows = ops.element_rows(static_cast<std::size_t>(e));
    for (int i = 0; i < ops.dim(); ++i) c.row(e) += rows.row(i);
  }
  return c;
}

std::size_t isochoric_dimension(const DiscreteOperators& ops) {
  return ops.n_dof() - numerical_rank(isochoric_constraints(ops));
}

std::size_t numerical_rank(const Eigen::MatrixXd& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > rel_tol * s[0]) ++r;
  }
  return r;
}

std::size_t rigid_kernel_dim(const DiscreteOperators& ops) {
  return ops.n_dof() - numerical_rank(ops.strain_matrix());
}

TractionField parse_traction(std::string_view text, const DiscreteOperators& ops) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("traction file: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("facets")) {
    throw ParseError("traction: missing key \"facets\"");
  }
  const json& facets = doc["facets"];
  if (!facets.is_array()) throw ParseError("traction.facets: expected an array");
  if (facets.size() != ops.n_traction_facets()) {
    throw ParseError("traction.facets: expected " + std::to_string(ops.n_traction_facets()) +
                     " entries (one per gammaT facet), got " + std::to_string(facets.size()));
  }
  TractionField t = TractionField::zero(ops.dim(), ops.n_traction_facets());
  for (std::size_t f = 0; f < facets.size(); ++f) {
    const std::string where = "traction.facets[" + std::to_string(f) + "]";
    if (!facets[f].is_array() || facets[f].size() != static_cast<std::size_t>(ops.dim())) {
      throw ParseError(where + ": expected a vector of length " + std::to_string(ops.dim()));
    }
    for (int c = 0; c < ops.dim(); ++c) {
      const json& v = facets[f][static_cast<std::size_t>(c)];
      if (!v.is_number() || !std::isfinite(v.get<double>())) {
        throw ParseError(where + "[" + std::to_string(c) + "]: expected a finite number");
      }
      t.values[static_cast<Eigen::Index>(f) * ops.dim() + c] = v.get<double>();
    }
  }
  return t;
}

TractionField read_traction(const std::filesystem::path& path, const DiscreteOperators& ops) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open traction file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_traction(buf.str(), ops);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string format_traction(const TractionField& t) {
  using nlohmann::json;
  json facets = json::array();
  for (std::size_t f = 0; f < t.facet_count(); ++f) {
    json v = json::array();
    for (int c = 0; c < t.dim; ++c) v.push_back(t.values[static_cast<Eigen::Index>(f) * t.dim + c]);
    facets.push_back(std::move(v));
  }
  return json{{"facets", facets}}.dump() + "\n";
}

void write_traction(const TractionField& t, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write traction file " + path.string());
  out << format_traction(t);
}

}  // namespace loadcap
