#pragma once

#include <cstddef>
#include <limits>
#include <string_view>

#include "loadcap/kinematics.hpp"
#include "loadcap/stress.hpp"

namespace loadcap {

/// Hard cap on boundary velocity components for exhaustive sign enumeration.
inline constexpr std::size_t kEnumerationCap = 16;
/// Pattern updates allowed to the alternating heuristic.
inline constexpr int kHeuristicIterationCap = 50;

enum class KMethod { ExactVertexEnumeration, AlternatingHeuristic };

std::string_view to_string(KMethod method);

struct CapacityResult {
  Mode mode = Mode::Elastic;
  KMethod method = KMethod::ExactVertexEnumeration;
  double K = 0.0;
  /// 1/K; +infinity when no boundary component can be loaded (K = 0).
  double C = std::numeric_limits<double>::infinity();
  /// Sign traction (|t|_inf = 1) attaining K, or the best one found.
  TractionField worst_traction;
  /// Kinematic field with kinematic_norm = 1 whose trace norm is K.
  VelocityField certificate;
  /// True when K is only a lower bound (heuristic method).
  bool lower_bound = false;
  /// True when the heuristic hit its iteration cap before a fixpoint.
  bool iteration_cap_hit = false;
  std::size_t lp_solves = 0;
};

/// sigma_opt(t) / |t|_inf. Throws ValidationError for a zero traction.
double concentration_factor_for(const DiscreteOperators& ops, const TractionField& t, Mode mode);

/// Generalized stress concentration factor: the norm of the trace operator
/// from the kinematic space (isochoric in plastic mode) to L1(gammaT).
///
/// Exact method: maximizes over sign patterns of the boundary components; a
/// pattern and its negation give the same LP value, so only patterns with a
/// positive first component are solved. Throws ValidationError when the
/// component count exceeds kEnumerationCap.
CapacityResult generalized_K(const DiscreteOperators& ops, Mode mode, KMethod method);

struct DualCheckResult {
  double K_prime = 0.0;
  TractionField argmax;
};

/// K' = max over sign tractions t of the primal sigma_opt(t). Same cap.
DualCheckResult generalized_K_dual_check(const DiscreteOperators& ops, Mode mode);

/// generalized_K with C = 1/K filled in (C = +inf when K = 0).
CapacityResult load_capacity(const DiscreteOperators& ops, Mode mode, KMethod method);

struct LimitResult {
  double Y0 = 0.0;
  double sigma_opt = 0.0;
  double lambda_star = 0.0;
  TractionField t_collapse;
  /// sigma_opt(t_collapse), which equals Y0 up to solver tolerance.
  double sigma_opt_collapse = 0.0;
};

/// Radial projection of t onto the collapse manifold: t * Y0 / sigma_opt(t).
TractionField project_to_collapse(const DiscreteOperators& ops, const TractionField& t,
                                  double Y0);

/// Static limit factor Y0 / sigma_opt(t) in plastic mode.
LimitResult limit_analysis(const DiscreteOperators& ops, const TractionField& t, double Y0);

struct KinematicLimitCheck {
  double lambda_static = 0.0;
  double lambda_kinematic = 0.0;
  double gap = 0.0;
  VelocityField mechanism;  ///< minimizer with unit external work
};

/// Kinematic limit factor Y0 * min { deviatoric_strain_norm(w) : work(t, w) = 1,
/// w isochoric } compared against the static one.
KinematicLimitCheck kinematic_limit_check(const DiscreteOperators& ops, const TractionField& t,
                                          double Y0);

}  // namespace loadcap
