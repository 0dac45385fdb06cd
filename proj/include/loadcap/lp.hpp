#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace loadcap::lp {

/// minimize c.x subject to A x = b, x >= 0.
struct StandardForm {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
};

enum class Status { Optimal, Infeasible, Unbounded };

std::string_view to_string(Status status);

struct Solution {
  Status status = Status::Infeasible;
  Eigen::VectorXd x;  ///< primal point (optimal only)
  Eigen::VectorXd y;  ///< equality multipliers, c - A^T y >= 0 at optimum
  double objective = 0.0;
  std::size_t iterations = 0;
};

/// Fixed tolerances shared by the solver and the solution checks.
inline constexpr double kFeasibilityTol = 1e-8;
inline constexpr double kPivotTol = 1e-11;

/// Two-phase dense tableau simplex with Bland's rule.
///
/// Throws std::invalid_argument on inconsistent shapes or non-finite data and
/// IterationLimitError when the pivot budget is exhausted. The final basis is
/// re-factorized against the original data to recover x and y.
Solution solve(const StandardForm& problem, std::size_t max_iterations = 0);

/// Enumeration oracle for small problems (at most kBruteLimit rows and
/// columns). Enumerates every basic solution, and every extreme ray of the
/// recession cone for unboundedness; no simplex machinery is shared with
/// solve().
inline constexpr std::size_t kBruteLimit = 14;
Solution solve_brute(const StandardForm& problem);

/// Worst violations of the optimality conditions for a claimed optimum.
struct Certificate {
  double primal_residual = 0.0;   ///< ||A x - b||_inf
  double min_x = 0.0;             ///< min_j x_j
  double min_reduced_cost = 0.0;  ///< min_j (c - A^T y)_j
  double complementarity = 0.0;   ///< max_j |x_j (c - A^T y)_j|
  double duality_gap = 0.0;       ///< |c.x - b.y|
};

Certificate certify(const StandardForm& problem, const Solution& solution);

/// True when the certificate meets the documented optimality tolerances.
bool certificate_ok(const StandardForm& problem, const Solution& solution);

/// Plain-text dump for bug reports.
std::string dump(const StandardForm& problem);

}  // namespace loadcap::lp
