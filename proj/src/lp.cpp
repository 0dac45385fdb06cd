#include "loadcap/lp.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "loadcap/errors.hpp"

namespace loadcap::lp {

namespace {

using Tableau = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kCrashPivotRatio = 1e-3;

void check_shapes(const StandardForm& p) {
  if (p.A.rows() != p.b.size() || p.A.cols() != p.c.size()) {
    throw std::invalid_argument("LP shape mismatch: A is " + std::to_string(p.A.rows()) + "x" +
                                std::to_string(p.A.cols()) + ", b has " +
                                std::to_string(p.b.size()) + ", c has " +
                                std::to_string(p.c.size()));
  }
  if (!p.A.allFinite() || !p.b.allFinite() || !p.c.allFinite()) {
    throw std::invalid_argument("LP data must be finite");
  }
}

/// Dense tableau with the objective row stored separately. Column `rhs` holds
/// the basic values.
class Simplex {
 public:
  Simplex(Tableau t, std::vector<Eigen::Index> basis, Eigen::Index n_real,
          std::size_t max_iterations)
      : t0_(t),
        t_(std::move(t)),
        basis_(std::move(basis)),
        n_real_(n_real),
        rhs_(t_.cols() - 1),
        zero_tol_(1e-11 * (1.0 + t0_.col(rhs_).lpNorm<Eigen::Infinity>())),
        max_iterations_(max_iterations) {
    refactor();
  }

  enum class Outcome { Optimal, Unbounded };

  /// Minimizes cost . x over the current basis; artificial columns (index >=
  /// n_real) never enter. Optimal and unbounded verdicts are only accepted on a
  /// freshly re-factorized tableau.
  Outcome run(const Eigen::VectorXd& cost) {
    cost_ = cost;
    price();
    const double opt_tol = 1e-10 * std::max(1.0, cost.lpNorm<Eigen::Infinity>());
    bool fresh = true;
    for (;;) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < n_real_; ++j) {
        if (reduced_[j] < -opt_tol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) {
        if (fresh) return Outcome::Optimal;
        refactor();
        fresh = true;
        continue;
      }

      const double tol =
          std::max(kPivotTol, kRelativePivotTol * t_.col(enter).cwiseAbs().maxCoeff());
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < t_.rows(); ++i) {
        if (blocks(i, enter, tol)) best = std::min(best, ratio(i, enter));
      }
      if (!std::isfinite(best)) {
        if (fresh) return Outcome::Unbounded;
        refactor();
        fresh = true;
        continue;
      }
      Eigen::Index leave = -1;
      const double tie = 1e-12 * (1.0 + best);
      for (Eigen::Index i = 0; i < t_.rows(); ++i) {
        if (!blocks(i, enter, tol)) continue;
        if (ratio(i, enter) <= best + tie &&
            (leave < 0 || basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
          leave = i;
        }
      }
      pivot(leave, enter);
      fresh = false;
      if (++iterations_ > max_iterations_) {
        throw IterationLimitError("simplex exceeded " + std::to_string(max_iterations_) +
                                  " pivots");
      }
      if (iterations_ % kRefactorInterval == 0) {
        refactor();
        fresh = true;
      }
    }
  }

  /// Rebuilds the tableau as B^-1 times the initial tableau, discarding the
  /// rounding accumulated by successive pivots.
  void refactor() {
    const Eigen::Index m = t_.rows();
    Eigen::MatrixXd B(m, m);
    for (Eigen::Index i = 0; i < m; ++i) B.col(i) = t0_.col(basis_[static_cast<std::size_t>(i)]);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
    const Eigen::MatrixXd fresh = lu.solve(Eigen::MatrixXd(t0_));
    if (!fresh.allFinite()) throw SolverError("simplex: basis became singular");
    t_ = fresh;
    for (Eigen::Index i = 0; i < m; ++i) {
      const auto col = basis_[static_cast<std::size_t>(i)];
      t_.col(col).setZero();
      t_(i, col) = 1.0;
    }
    snap();
    if (cost_.size() > 0) price();
  }

  void pivot(Eigen::Index row, Eigen::Index col) {
    t_.row(row) /= t_(row, col);
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      if (i == row) continue;
      const double f = t_(i, col);
      if (f != 0.0) t_.row(i) -= f * t_.row(row);
    }
    if (reduced_.size() == t_.cols()) {
      const double f = reduced_[col];
      if (f != 0.0) reduced_ -= f * t_.row(row).transpose();
    }
    basis_[static_cast<std::size_t>(row)] = col;
    snap();
  }

  /// Basic artificials at zero level are pivoted out where possible; rows
  /// with no real entry are redundant and keep their artificial.
  void drive_out_artificials() {
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      if (basis_[static_cast<std::size_t>(i)] < n_real_) continue;
      Eigen::Index best = -1;
      double mag = kPivotTol * 1e3;
      for (Eigen::Index j = 0; j < n_real_; ++j) {
        if (std::abs(t_(i, j)) > mag) {
          mag = std::abs(t_(i, j));
          best = j;
        }
      }
      if (best >= 0) pivot(i, best);
    }
    lock_artificials_ = true;
  }

  double objective(const Eigen::VectorXd& cost) const {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      acc += cost[basis_[static_cast<std::size_t>(i)]] * t_(i, rhs_);
    }
    return acc;
  }

  const Tableau& tableau() const { return t_; }
  const std::vector<Eigen::Index>& basis() const { return basis_; }
  std::size_t iterations() const { return iterations_; }

 private:
  /// Basic values within rounding of zero are set to exactly zero, so that
  /// degenerate pivots stay degenerate and Bland's rule cannot cycle on noise.
  void snap() {
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      if (std::abs(t_(i, rhs_)) <= zero_tol_) t_(i, rhs_) = 0.0;
    }
  }

  bool locked(Eigen::Index row) const {
    return lock_artificials_ && basis_[static_cast<std::size_t>(row)] >= n_real_;
  }

  /// Entries up to tol (relative to the column) are not pivots. After phase 1
  /// a remaining basic artificial sits at zero and must stay there, so any
  /// other entry in its row blocks the step.
  bool blocks(Eigen::Index row, Eigen::Index col, double tol) const {
    const double a = t_(row, col);
    return a > tol || (locked(row) && std::abs(a) > tol);
  }

  double ratio(Eigen::Index row, Eigen::Index col) const {
    if (locked(row)) return 0.0;
    return std::max(0.0, t_(row, rhs_)) / t_(row, col);
  }

  void price() {
    reduced_ = Eigen::VectorXd::Zero(t_.cols());
    reduced_.head(cost_.size()) = cost_;
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      const double cb = cost_[basis_[static_cast<std::size_t>(i)]];
      if (cb != 0.0) reduced_ -= cb * t_.row(i).transpose();
    }
  }

  static constexpr std::size_t kRefactorInterval = 128;
  static constexpr double kRelativePivotTol = 1e-9;

  Tableau t0_;
  Tableau t_;
  std::vector<Eigen::Index> basis_;
  Eigen::VectorXd cost_;
  Eigen::Index n_real_;
  Eigen::Index rhs_;
  double zero_tol_;
  Eigen::VectorXd reduced_;
  std::size_t iterations_ = 0;
  std::size_t max_iterations_;
  bool lock_artificials_ = false;
};

}  // namespace

std::string_view to_string(Status status) {
  switch (status) {
    case Status::Optimal:
      return "optimal";
    case Status::Infeasible:
      return "infeasible";
    case Status::Unbounded:
      return "unbounded";
  }
  return "?";
}

Solution solve(const StandardForm& p, std::size_t max_iterations) {
  check_shapes(p);
  const Eigen::Index m = p.A.rows();
  const Eigen::Index n = p.A.cols();
  if (max_iterations == 0) max_iterations = 100 * static_cast<std::size_t>(m + n) + 1000;

  Solution sol;
  if (m == 0) {
    if ((p.c.array() < 0.0).any()) {
      sol.status = Status::Unbounded;
    } else {
      sol.status = Status::Optimal;
      sol.x = Eigen::VectorXd::Zero(n);
      sol.y = Eigen::VectorXd::Zero(0);
    }
    return sol;
  }

  Eigen::VectorXd sign(m);
  for (Eigen::Index i = 0; i < m; ++i) sign[i] = p.b[i] < 0.0 ? -1.0 : 1.0;

  // Triangular crash: columns are taken sparsest first, each pivoting on an
  // uncovered row with a positive entry (after the row sign flip) and touching
  // no row covered before it. The basis stays triangular; if its basic
  // solution is infeasible only singleton columns are kept. Uncovered rows get
  // an artificial.
  std::vector<Eigen::Index> nonzeros(static_cast<std::size_t>(n), 0);
  for (Eigen::Index j = 0; j < n; ++j) {
    nonzeros[static_cast<std::size_t>(j)] = (p.A.col(j).array() != 0.0).count();
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j) order[static_cast<std::size_t>(j)] = j;
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    return nonzeros[static_cast<std::size_t>(x)] < nonzeros[static_cast<std::size_t>(y)];
  });
  std::vector<Eigen::Index> crash(static_cast<std::size_t>(m), -1);
  for (const Eigen::Index j : order) {
    const double floor = kCrashPivotRatio * p.A.col(j).cwiseAbs().maxCoeff();
    Eigen::Index row = -1;
    bool clash = false;
    for (Eigen::Index i = 0; i < m && !clash; ++i) {
      const double a = p.A(i, j) * sign[i];
      if (a == 0.0) continue;
      if (crash[static_cast<std::size_t>(i)] >= 0) {
        clash = true;
      } else if (a >= floor && (row < 0 || a > p.A(row, j) * sign[row])) {
        row = i;
      }
    }
    if (!clash && row >= 0) crash[static_cast<std::size_t>(row)] = j;
  }
  {
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const Eigen::Index j = crash[static_cast<std::size_t>(i)];
      if (j >= 0) {
        B.col(i) = p.A.col(j).cwiseProduct(sign);
      } else {
        B(i, i) = 1.0;
      }
    }
    const Eigen::VectorXd xb = B.partialPivLu().solve(Eigen::VectorXd(p.b.cwiseProduct(sign)));
    if (!xb.allFinite() || xb.minCoeff() < -1e-12 * (1.0 + p.b.lpNorm<Eigen::Infinity>())) {
      for (Eigen::Index i = 0; i < m; ++i) {
        const Eigen::Index j = crash[static_cast<std::size_t>(i)];
        if (j >= 0 && nonzeros[static_cast<std::size_t>(j)] != 1) crash[static_cast<std::size_t>(i)] = -1;
      }
    }
  }
  std::vector<Eigen::Index> art_row;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (crash[static_cast<std::size_t>(i)] < 0) art_row.push_back(i);
  }
  const auto n_art = static_cast<Eigen::Index>(art_row.size());

  Tableau t = Tableau::Zero(m, n + n_art + 1);
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    t.row(i).head(n) = p.A.row(i) * sign[i];
    t(i, n + n_art) = p.b[i] * sign[i];
    basis[static_cast<std::size_t>(i)] = crash[static_cast<std::size_t>(i)];
  }
  for (Eigen::Index k = 0; k < n_art; ++k) {
    const Eigen::Index i = art_row[static_cast<std::size_t>(k)];
    t(i, n + k) = 1.0;
    basis[static_cast<std::size_t>(i)] = n + k;
  }

  Simplex simplex(std::move(t), std::move(basis), n, max_iterations);
  const double b_scale = 1.0 + p.b.lpNorm<Eigen::Infinity>();
  if (n_art > 0) {
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(n + n_art);
    phase1.tail(n_art).setOnes();
    simplex.run(phase1);
    if (simplex.objective(phase1) > kFeasibilityTol * b_scale) {
      sol.status = Status::Infeasible;
      sol.iterations = simplex.iterations();
      return sol;
    }
    simplex.drive_out_artificials();
  }

  Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(n + n_art);
  phase2.head(n) = p.c;
  const auto outcome = simplex.run(phase2);
  sol.iterations = simplex.iterations();
  if (outcome == Simplex::Outcome::Unbounded) {
    sol.status = Status::Unbounded;
    return sol;
  }

  // Re-factorize the final basis on the original data.
  const auto& tab = simplex.tableau();
  const auto& final_basis = simplex.basis();
  Eigen::MatrixXd B(m, m);
  Eigen::VectorXd cb(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index j = final_basis[static_cast<std::size_t>(i)];
    if (j < n) {
      B.col(i) = p.A.col(j);
      cb[i] = p.c[j];
    } else {
      const Eigen::Index row = art_row[static_cast<std::size_t>(j - n)];
      B.col(i).setZero();
      B(row, i) = sign[row];
      cb[i] = 0.0;
    }
  }
  Eigen::VectorXd xb_tab(m);
  for (Eigen::Index i = 0; i < m; ++i) xb_tab[i] = tab(i, tab.cols() - 1);

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
  Eigen::VectorXd xb = lu.solve(p.b);
  Eigen::VectorXd y = lu.transpose().solve(cb);
  const double res_refined = (B * xb - p.b).lpNorm<Eigen::Infinity>();
  const double res_tab = (B * xb_tab - p.b).lpNorm<Eigen::Infinity>();
  if (!xb.allFinite() || res_refined > res_tab || xb.minCoeff() < -1e-10 * b_scale) {
    xb = xb_tab;
  }
  if (!y.allFinite()) {
    throw SolverError("simplex: final basis is singular");
  }

  sol.status = Status::Optimal;
  sol.x = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index j = final_basis[static_cast<std::size_t>(i)];
    if (j < n) sol.x[j] = xb[i];
  }
  sol.y = y;
  sol.objective = p.c.dot(sol.x);
  return sol;
}

Certificate certify(const StandardForm& p, const Solution& s) {
  Certificate c;
  if (s.status != Status::Optimal) return c;
  c.primal_residual = (p.A * s.x - p.b).lpNorm<Eigen::Infinity>();
  c.min_x = s.x.size() ? s.x.minCoeff() : 0.0;
  const Eigen::VectorXd reduced = p.c - p.A.transpose() * s.y;
  c.min_reduced_cost = reduced.size() ? reduced.minCoeff() : 0.0;
  c.complementarity = reduced.size() ? (s.x.array() * reduced.array()).abs().maxCoeff() : 0.0;
  c.duality_gap = std::abs(p.c.dot(s.x) - p.b.dot(s.y));
  return c;
}

bool certificate_ok(const StandardForm& p, const Solution& s) {
  if (s.status != Status::Optimal) return false;
  const Certificate c = certify(p, s);
  const double scale_b = 1.0 + p.b.lpNorm<Eigen::Infinity>();
  const double scale_c = 1.0 + p.c.lpNorm<Eigen::Infinity>();
  return c.primal_residual <= kFeasibilityTol * scale_b && c.min_x >= -1e-10 * scale_b &&
         c.min_reduced_cost >= -kFeasibilityTol * scale_c &&
         c.complementarity <= kFeasibilityTol * scale_b * scale_c &&
         c.duality_gap <= kFeasibilityTol * (1.0 + std::abs(s.objective));
}

std::string dump(const StandardForm& p) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "# minimize c.x s.t. A x = b, x >= 0\n";
  os << "rows " << p.A.rows() << " cols " << p.A.cols() << "\n";
  os << "c";
  for (Eigen::Index j = 0; j < p.c.size(); ++j) os << ' ' << p.c[j];
  os << "\n";
  for (Eigen::Index i = 0; i < p.A.rows(); ++i) {
    os << "A" << i;
    for (Eigen::Index j = 0; j < p.A.cols(); ++j) os << ' ' << p.A(i, j);
    os << " | " << p.b[i] << "\n";
  }
  return os.str();
}

}  // namespace loadcap::lp
