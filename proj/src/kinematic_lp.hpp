#pragma once

#include <vector>

#include "loadcap/kinematics.hpp"
#include "loadcap/linear_program.hpp"
#include "loadcap/stress.hpp"

namespace loadcap::detail {

struct KinematicVariables {
  std::vector<std::size_t> w;               ///< one free variable per DOF
  lp::LinearProgram::Terms measure;         ///< linear form equal to kinematic_norm at optimum
};

/// Adds a kinematic field to `prog` together with the polyhedral lifting of
/// its kinematic norm: every strain entry is split into nonnegative parts
/// whose weighted sum is `measure`. Plastic mode adds the isochoric rows and a
/// free spherical shift per element (the yield dual).
KinematicVariables add_kinematic_field(lp::LinearProgram& prog, const DiscreteOperators& ops,
                                       Mode mode);

}  // namespace loadcap::detail
