#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "loadcap/lp.hpp"

namespace loadcap::lp {

/// General-form LP assembled term by term and lowered to StandardForm.
/// Free variables are split into positive and negative parts, inequality rows
/// receive slack or surplus columns.
class LinearProgram {
 public:
  enum class Sense { Minimize, Maximize };
  enum class Row { LessEqual, Equal, GreaterEqual };
  using Terms = std::vector<std::pair<std::size_t, double>>;

  explicit LinearProgram(Sense sense) : sense_(sense) {}

  std::size_t add_free(double cost = 0.0) { return add(true, cost); }
  std::size_t add_nonnegative(double cost = 0.0) { return add(false, cost); }
  void add_row(Terms terms, Row kind, double rhs);
  void set_cost(std::size_t var, double cost) { cost_.at(var) = cost; }

  std::size_t variable_count() const { return free_.size(); }
  std::size_t row_count() const { return rows_.size(); }

  struct Result {
    Status status = Status::Infeasible;
    Eigen::VectorXd values;  ///< one per variable
    Eigen::VectorXd duals;   ///< one per row, sign convention of the stated sense
    double objective = 0.0;
    std::size_t iterations = 0;
  };

  StandardForm lower() const;
  Result solve() const;

 private:
  std::size_t add(bool is_free, double cost) {
    free_.push_back(is_free);
    cost_.push_back(cost);
    return free_.size() - 1;
  }

  struct RowData {
    Terms terms;
    Row kind;
    double rhs;
  };

  Sense sense_;
  std::vector<bool> free_;
  std::vector<double> cost_;
  std::vector<RowData> rows_;
};

}  // namespace loadcap::lp
