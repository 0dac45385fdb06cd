#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "loadcap/lp.hpp"

namespace loadcap::lp {

namespace {

constexpr double kRankTol = 1e-10;

struct Reduced {
  Eigen::MatrixXd A;  // independent rows only
  Eigen::VectorXd b;
  std::vector<Eigen::Index> rows;
  bool consistent = true;
};

Eigen::Index rank_of(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  lu.setThreshold(kRankTol);
  return lu.rank();
}

/// Drops dependent rows of A x = b and reports whether the system is solvable.
Reduced reduce(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  Reduced r;
  if (A.rows() > 0 && A.cols() > 0) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    lu.setThreshold(kRankTol);
    const Eigen::VectorXd x = lu.solve(b);
    r.consistent = (A * x - b).lpNorm<Eigen::Infinity>() <=
                   1e-9 * (1.0 + b.lpNorm<Eigen::Infinity>());
  } else {
    r.consistent = b.size() == 0 || b.lpNorm<Eigen::Infinity>() <= 1e-12;
  }
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    std::vector<Eigen::Index> trial = r.rows;
    trial.push_back(i);
    Eigen::MatrixXd sub(static_cast<Eigen::Index>(trial.size()), A.cols());
    for (std::size_t k = 0; k < trial.size(); ++k) sub.row(static_cast<Eigen::Index>(k)) = A.row(trial[k]);
    if (rank_of(sub) == static_cast<Eigen::Index>(trial.size())) r.rows = std::move(trial);
  }
  r.A.resize(static_cast<Eigen::Index>(r.rows.size()), A.cols());
  r.b.resize(static_cast<Eigen::Index>(r.rows.size()));
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    r.A.row(static_cast<Eigen::Index>(k)) = A.row(r.rows[k]);
    r.b[static_cast<Eigen::Index>(k)] = b[r.rows[k]];
  }
  return r;
}

/// Calls visit(columns, x) for every basic feasible solution of A x = b,
/// x >= 0, where A has full row rank.
void for_each_bfs(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                  const std::function<void(const std::vector<Eigen::Index>&,
                                           const Eigen::VectorXd&)>& visit) {
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  const double feas = 1e-9 * (1.0 + b.lpNorm<Eigen::Infinity>());
  if (m == 0) {
    visit({}, Eigen::VectorXd::Zero(n));
    return;
  }
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != m) continue;
    std::vector<Eigen::Index> cols;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (mask & (1u << j)) cols.push_back(j);
    }
    Eigen::MatrixXd B(m, m);
    for (Eigen::Index k = 0; k < m; ++k) B.col(k) = A.col(cols[static_cast<std::size_t>(k)]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
    lu.setThreshold(kRankTol);
    if (lu.rank() < m) continue;
    const Eigen::VectorXd xb = lu.solve(b);
    if (xb.minCoeff() < -feas) continue;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (Eigen::Index k = 0; k < m; ++k) x[cols[static_cast<std::size_t>(k)]] = std::max(0.0, xb[k]);
    visit(cols, x);
  }
}

}  // namespace

Solution solve_brute(const StandardForm& p) {
  if (p.A.rows() != p.b.size() || p.A.cols() != p.c.size()) {
    throw std::invalid_argument("LP shape mismatch");
  }
  if (static_cast<std::size_t>(p.A.rows()) > kBruteLimit ||
      static_cast<std::size_t>(p.A.cols()) > kBruteLimit) {
    throw std::invalid_argument("solve_brute: size limit exceeded (at most " +
                                std::to_string(kBruteLimit) + " rows and columns)");
  }
  const Eigen::Index n = p.A.cols();
  Solution sol;
  const Reduced red = reduce(p.A, p.b);
  if (!red.consistent) {
    sol.status = Status::Infeasible;
    return sol;
  }

  double best = std::numeric_limits<double>::infinity();
  bool found = false;
  std::vector<Eigen::Index> best_cols;
  Eigen::VectorXd best_x;
  for_each_bfs(red.A, red.b, [&](const std::vector<Eigen::Index>& cols, const Eigen::VectorXd& x) {
    const double obj = p.c.dot(x);
    if (!found || obj < best - 1e-12 * (1.0 + std::abs(best))) {
      found = true;
      best = obj;
      best_cols = cols;
      best_x = x;
    }
  });
  if (!found) {
    sol.status = Status::Infeasible;
    return sol;
  }

  // Unbounded iff some extreme ray d (A d = 0, d >= 0, sum d = 1) has c.d < 0.
  Eigen::MatrixXd ray_A(red.A.rows() + 1, n);
  ray_A.topRows(red.A.rows()) = red.A;
  ray_A.bottomRows(1).setOnes();
  Eigen::VectorXd ray_b = Eigen::VectorXd::Zero(red.A.rows() + 1);
  ray_b[red.A.rows()] = 1.0;
  const Reduced rays = reduce(ray_A, ray_b);
  bool unbounded = false;
  if (rays.consistent) {
    for_each_bfs(rays.A, rays.b, [&](const std::vector<Eigen::Index>&, const Eigen::VectorXd& d) {
      if (p.c.dot(d) < -1e-9) unbounded = true;
    });
  }
  if (unbounded) {
    sol.status = Status::Unbounded;
    return sol;
  }

  sol.status = Status::Optimal;
  sol.x = best_x;
  sol.objective = best;
  sol.y = Eigen::VectorXd::Zero(p.A.rows());
  if (!best_cols.empty()) {
    const auto r = static_cast<Eigen::Index>(best_cols.size());
    Eigen::MatrixXd B(r, r);
    Eigen::VectorXd cb(r);
    for (Eigen::Index k = 0; k < r; ++k) {
      B.col(k) = red.A.col(best_cols[static_cast<std::size_t>(k)]);
      cb[k] = p.c[best_cols[static_cast<std::size_t>(k)]];
    }
    const Eigen::VectorXd yr = B.transpose().fullPivLu().solve(cb);
    for (std::size_t k = 0; k < red.rows.size(); ++k) sol.y[red.rows[k]] = yr[static_cast<Eigen::Index>(k)];
  }
  return sol;
}

}  // namespace loadcap::lp
