#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "loadcap/kinematics.hpp"
#include "loadcap/matnorm.hpp"

namespace loadcap {

/// elastic: stresses measured by the full matrix norm.
/// plastic: stresses measured by the yield seminorm |dev(sigma)|, kinematic
///          fields restricted to the isochoric subspace.
enum class Mode { Elastic, Plastic };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

/// Piecewise constant stress. In 2D plastic mode `out_of_plane` carries the
/// sigma_33 component of each element (it does no work on plane strains but
/// enters the yield seminorm); otherwise it is empty.
struct StressField {
  std::vector<SymMatrix> stresses;
  std::vector<double> out_of_plane;

  /// Element stress embedded as 3x3, including sigma_33 when present.
  SymMatrix full(std::size_t e) const;
};

double stress_measure(const StressField& s, Mode mode, NormPair norms = NormPair::l1_linf());

/// Kinematic measure paired with stress_measure: strain_norm_l1 in elastic
/// mode, deviatoric_strain_norm in plastic mode.
double kinematic_norm(const DiscreteOperators& ops, const VelocityField& w, Mode mode);

struct EquilibriumCheck {
  bool ok = false;
  double residual = 0.0;
};

/// Virtual work balance against every DOF basis field:
///   sum_e volume_e sigma_e : eps_e(w_k) = external_work(t, w_k).
/// Passes when residual <= tol * (1 + traction_sup_norm(t)).
EquilibriumCheck check_equilibrium(const DiscreteOperators& ops, const StressField& s,
                                   const TractionField& t, double tol);

struct PrimalResult {
  double sigma_opt = 0.0;
  StressField sigma_hat;
};

struct DualResult {
  double value = 0.0;
  VelocityField witness;
};

struct OptimalStressResult {
  Mode mode = Mode::Elastic;
  double sigma_opt = 0.0;
  StressField sigma_hat;
  double dual_value = 0.0;
  VelocityField dual_witness;
  double duality_gap = 0.0;
};

/// Relative gap allowed between the primal and kinematic optima.
inline constexpr double kDualityTol = 1e-6;

/// Throws ValidationError unless the isochoric subspace is nontrivial.
void require_plastic_viable(const DiscreteOperators& ops);

/// min over equilibrating stress fields of max_e |sigma_e|, as an LP.
PrimalResult optimal_stress_primal(const DiscreteOperators& ops, const TractionField& t,
                                   Mode mode);

/// sup over kinematic fields of work(t, w) / kinematic_norm(w), as the LP
/// max work(t, w) s.t. kinematic_norm(w) <= 1. The witness is normalized.
DualResult optimal_stress_dual(const DiscreteOperators& ops, const TractionField& t, Mode mode);

/// Both sides plus the duality-gap check (SolverError when it fails).
OptimalStressResult optimal_stress(const DiscreteOperators& ops, const TractionField& t,
                                   Mode mode);

}  // namespace loadcap
