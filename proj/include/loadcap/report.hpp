#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "loadcap/capacity.hpp"
#include "loadcap/kinematics.hpp"
#include "loadcap/stress.hpp"
#include "loadcap/verify.hpp"

namespace loadcap::report {

inline constexpr std::string_view kToolVersion = "1.0.0";

/// 64-bit FNV-1a of a byte string.
std::uint64_t fnv1a64(std::string_view bytes);
/// "fnv1a64:" followed by 16 lowercase hex digits.
std::string digest(std::string_view bytes);

struct Inputs {
  std::string mesh_digest;
  std::string traction_digest;  ///< empty when no traction file is read
  Mode mode = Mode::Elastic;
  NormPair norms = NormPair::l1_linf();
};

/// Structured reports, one JSON object each. Wall time is not part of them so
/// identical inputs give identical bytes.
std::string analyze(const Inputs& in, const DiscreteOperators& ops, const TractionField& t,
                    const OptimalStressResult& r, const EquilibriumCheck& eq);

std::string capacity(const Inputs& in, const DiscreteOperators& ops, const CapacityResult& r,
                     const std::optional<DualCheckResult>& dual, bool caps_hit);

std::string limit(const Inputs& in, const DiscreteOperators& ops, const TractionField& t,
                  const LimitResult& r, const KinematicLimitCheck& k);

std::string verify(std::string_view mesh_digest, const VerifyReport& r);

}  // namespace loadcap::report
