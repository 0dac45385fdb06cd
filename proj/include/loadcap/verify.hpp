#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "loadcap/mesh.hpp"

namespace loadcap {

/// Tally of one named invariant over all its samples.
struct CheckTally {
  std::string name;
  int passed = 0;
  int total = 0;
  double worst = 0.0;         ///< largest observed violation measure
  std::string first_failure;  ///< empty when every sample passed
  std::string skipped;        ///< reason, when the check does not apply

  bool ok() const { return passed == total; }
};

struct VerifyReport {
  std::uint64_t seed = 0;
  int trials = 0;
  std::vector<CheckTally> checks;

  bool ok() const;
};

/// Seeded invariant suite on one mesh: kernel and affine-strain checks,
/// duality gaps, equilibrium, attainment, homogeneity, K versus sampled K_t,
/// K versus its traction-side counterpart, limit identities and random LPs
/// against the enumeration oracle. Verdicts are deterministic in (mesh, seed).
VerifyReport run_verify(const Mesh& mesh, std::uint64_t seed, int trials);

}  // namespace loadcap
