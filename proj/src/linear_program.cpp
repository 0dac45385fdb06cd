#include "loadcap/linear_program.hpp"

#include <stdexcept>

namespace loadcap::lp {

void LinearProgram::add_row(Terms terms, Row kind, double rhs) {
  for (const auto& [var, coef] : terms) {
    if (var >= free_.size()) throw std::out_of_range("LinearProgram: unknown variable");
    (void)coef;
  }
  rows_.push_back({std::move(terms), kind, rhs});
}

StandardForm LinearProgram::lower() const {
  // column layout: one column per variable, a second (negative part) for each
  // free variable, then one slack/surplus per inequality row
  std::vector<Eigen::Index> neg_col(free_.size(), -1);
  Eigen::Index cols = static_cast<Eigen::Index>(free_.size());
  for (std::size_t v = 0; v < free_.size(); ++v) {
    if (free_[v]) neg_col[v] = cols++;
  }
  std::vector<Eigen::Index> slack_col(rows_.size(), -1);
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (rows_[r].kind != Row::Equal) slack_col[r] = cols++;
  }

  const double dir = sense_ == Sense::Minimize ? 1.0 : -1.0;
  StandardForm sf;
  sf.A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows_.size()), cols);
  sf.b.resize(static_cast<Eigen::Index>(rows_.size()));
  sf.c = Eigen::VectorXd::Zero(cols);
  for (std::size_t v = 0; v < free_.size(); ++v) {
    sf.c[static_cast<Eigen::Index>(v)] = dir * cost_[v];
    if (neg_col[v] >= 0) sf.c[neg_col[v]] = -dir * cost_[v];
  }
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const auto i = static_cast<Eigen::Index>(r);
    for (const auto& [var, coef] : rows_[r].terms) {
      sf.A(i, static_cast<Eigen::Index>(var)) += coef;
      if (neg_col[var] >= 0) sf.A(i, neg_col[var]) -= coef;
    }
    if (rows_[r].kind == Row::LessEqual) sf.A(i, slack_col[r]) = 1.0;
    if (rows_[r].kind == Row::GreaterEqual) sf.A(i, slack_col[r]) = -1.0;
    sf.b[i] = rows_[r].rhs;
  }
  return sf;
}

LinearProgram::Result LinearProgram::solve() const {
  const StandardForm sf = lower();
  const Solution s = lp::solve(sf);
  Result out;
  out.status = s.status;
  out.iterations = s.iterations;
  if (s.status != Status::Optimal) return out;

  const double dir = sense_ == Sense::Minimize ? 1.0 : -1.0;
  out.values.resize(static_cast<Eigen::Index>(free_.size()));
  Eigen::Index next_neg = static_cast<Eigen::Index>(free_.size());
  for (std::size_t v = 0; v < free_.size(); ++v) {
    double value = s.x[static_cast<Eigen::Index>(v)];
    if (free_[v]) value -= s.x[next_neg++];
    out.values[static_cast<Eigen::Index>(v)] = value;
  }
  out.duals = dir * s.y;
  out.objective = dir * s.objective;
  return out;
}

}  // namespace loadcap::lp
