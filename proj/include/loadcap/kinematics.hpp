#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "loadcap/matnorm.hpp"
#include "loadcap/mesh.hpp"

namespace loadcap {

enum class Clamping {
  Gamma0,  ///< nodes on gamma0 facets are fixed and their DOFs eliminated
  None,    ///< every nodal component is free (rigid motions allowed)
};

/// Nodal velocity components on the free DOFs.
struct VelocityField {
  Eigen::VectorXd dofs;
};

/// One traction vector per gammaT facet, stored facet-major.
struct TractionField {
  int dim = 0;
  Eigen::VectorXd values;

  std::size_t facet_count() const {
    return dim > 0 ? static_cast<std::size_t>(values.size()) / static_cast<std::size_t>(dim) : 0;
  }
  Eigen::Ref<const Eigen::VectorXd> facet(std::size_t f) const {
    return values.segment(static_cast<Eigen::Index>(f) * dim, dim);
  }
  static TractionField zero(int dim, std::size_t facets) {
    return {dim, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(facets) * dim)};
  }
};

/// Discrete counterpart of the kinematic triple: the space of nodal fields
/// vanishing on gamma0, the strain operator on it, and its boundary trace on
/// gammaT.
///
/// Strains are stored as one dense matrix: element e owns the rows
/// [e * n_comp, (e + 1) * n_comp) in SymMatrix component order. The trace
/// matrix has `dim` rows per gammaT facet (the mean of the facet's nodal
/// values).
class DiscreteOperators {
 public:
  const Mesh& mesh() const { return *mesh_; }
  int dim() const { return mesh_->dim; }
  std::size_t n_dof() const { return n_dof_; }
  std::size_t n_elements() const { return mesh_->elements.size(); }
  std::size_t n_components() const { return SymMatrix::component_count(dim()); }
  std::size_t n_traction_facets() const { return traction_facets_.size(); }
  /// Scalar boundary velocity components on gammaT (facets x dim).
  std::size_t n_boundary_components() const {
    return traction_facets_.size() * static_cast<std::size_t>(dim());
  }
  Clamping clamping() const { return clamping_; }
  const NormPair& norm_pair() const { return norms_; }

  const Eigen::MatrixXd& strain_matrix() const { return strain_; }
  const Eigen::MatrixXd& trace_matrix() const { return trace_; }
  const Eigen::VectorXd& volumes() const { return volumes_; }
  const Eigen::VectorXd& areas() const { return areas_; }
  /// Mesh facet index of each gammaT facet, in traction order.
  const std::vector<std::size_t>& traction_facets() const { return traction_facets_; }
  /// First DOF of a node, or -1 when the node is clamped.
  long dof_of(std::size_t node) const { return node_dof_[node]; }

  /// Rows of the strain matrix belonging to element e.
  auto element_rows(std::size_t e) const {
    return strain_.middleRows(static_cast<Eigen::Index>(e * n_components()),
                              static_cast<Eigen::Index>(n_components()));
  }

  /// Nodal DOF vector of the field x -> f(x) evaluated at the free nodes.
  template <class F>
  VelocityField interpolate(F&& f) const {
    VelocityField w{Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_dof_))};
    for (std::size_t n = 0; n < mesh_->nodes.size(); ++n) {
      if (node_dof_[n] < 0) continue;
      const auto value = f(mesh_->nodes[n]);
      for (int c = 0; c < dim(); ++c) w.dofs[node_dof_[n] + c] = value[static_cast<std::size_t>(c)];
    }
    return w;
  }

  friend DiscreteOperators assemble(const Mesh& mesh, NormPair norms, Clamping clamping);

 private:
  std::shared_ptr<const Mesh> mesh_;
  NormPair norms_;
  Clamping clamping_ = Clamping::Gamma0;
  std::size_t n_dof_ = 0;
  std::vector<long> node_dof_;
  std::vector<std::size_t> traction_facets_;
  Eigen::MatrixXd strain_;
  Eigen::MatrixXd trace_;
  Eigen::VectorXd volumes_;
  Eigen::VectorXd areas_;
};

/// Builds the discrete operators. Throws InvalidMeshError for invalid meshes,
/// ValidationError for singular element geometry and std::invalid_argument
/// for norm pairs other than (l1 strain, linf stress).
DiscreteOperators assemble(const Mesh& mesh, NormPair norms = NormPair::l1_linf(),
                           Clamping clamping = Clamping::Gamma0);

std::vector<SymMatrix> strain(const DiscreteOperators& ops, const VelocityField& w);

/// sum_e volume_e |strain_e|_1: the norm of w in the discrete space.
double strain_norm_l1(const DiscreteOperators& ops, const VelocityField& w);

/// sum_e volume_e * yield_dual_value(strain_e). Kinematic measure paired with
/// the yield seminorm; equals strain_norm_l1 on isochoric plane-strain fields.
double deviatoric_strain_norm(const DiscreteOperators& ops, const VelocityField& w);

/// Facet means of nodal values, one `dim` vector per gammaT facet.
TractionField trace(const DiscreteOperators& ops, const VelocityField& w);

/// sum_f area_f |trace_f|_1
double trace_norm_l1(const DiscreteOperators& ops, const VelocityField& w);

/// sum_f area_f t_f . trace_f(w)
double external_work(const DiscreteOperators& ops, const TractionField& t,
                     const VelocityField& w);

/// Generalized load vector: external_work(t, w) = load_vector(t) . w.
Eigen::VectorXd load_vector(const DiscreteOperators& ops, const TractionField& t);

/// max_f |t_f|_inf over every gammaT facet, zero-traction facets included.
double traction_sup_norm(const DiscreteOperators& ops, const TractionField& t);

/// One row per element: the trace of its strain. Its kernel is the isochoric
/// subspace.
Eigen::MatrixXd isochoric_constraints(const DiscreteOperators& ops);

/// Dimension of the isochoric subspace (0 for bar meshes).
std::size_t isochoric_dimension(const DiscreteOperators& ops);

/// Nullity of the strain matrix (relative singular value tolerance 1e-9).
std::size_t rigid_kernel_dim(const DiscreteOperators& ops);

/// Numerical rank with singular values below rel_tol * sigma_max dropped.
std::size_t numerical_rank(const Eigen::MatrixXd& m, double rel_tol = 1e-9);

/// Traction file I/O. Files list one vector per gammaT facet in mesh order.
TractionField read_traction(const std::filesystem::path& path, const DiscreteOperators& ops);
TractionField parse_traction(std::string_view text, const DiscreteOperators& ops);
std::string format_traction(const TractionField& t);
void write_traction(const TractionField& t, const std::filesystem::path& path);

}  // namespace loadcap
