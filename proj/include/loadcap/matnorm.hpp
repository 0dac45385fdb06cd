#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>

namespace loadcap {

/// Polyhedral norm identifiers. Strings "l1" and "linf" in files and flags.
enum class NormId { EntrywiseOne, EntrywiseInf };

std::string_view to_string(NormId id);

/// Parses "l1" / "linf"; throws std::invalid_argument otherwise.
NormId parse_norm_id(std::string_view text);

/// entrywise_one <-> entrywise_inf.
NormId dual_norm_id(NormId id);

/// Strain-side norm together with its dual on the stress side.
///
/// Only the (entrywise-1 strain, entrywise-inf stress) pair is accepted by the
/// optimization modules; the type still carries both ids so reports can name
/// them explicitly.
struct NormPair {
  NormId primal = NormId::EntrywiseOne;
  NormId dual = NormId::EntrywiseInf;

  static NormPair l1_linf() { return {}; }
  bool operator==(const NormPair&) const = default;
};

/// Symmetric dim x dim matrix storing only the unique entries.
///
/// Component order: diagonal first, then off-diagonal entries.
///   dim 1: (00)
///   dim 2: (00, 11, 01)
///   dim 3: (00, 11, 22, 12, 02, 01)
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int dim);

  static SymMatrix identity(int dim);
  static SymMatrix diagonal(double a, double b, double c);
  static constexpr std::size_t component_count(int dim) {
    return static_cast<std::size_t>(dim * (dim + 1) / 2);
  }
  /// Number of full-matrix positions a unique component occupies (1 or 2).
  static constexpr int multiplicity(int dim, std::size_t component) {
    return component < static_cast<std::size_t>(dim) ? 1 : 2;
  }
  /// Index (row, col) of a unique component.
  static std::array<int, 2> position(int dim, std::size_t component);
  static std::size_t component_index(int dim, int i, int j);

  int dim() const { return dim_; }
  std::size_t size() const { return component_count(dim_); }

  double operator()(int i, int j) const;
  double& at(int i, int j);

  double& operator[](std::size_t c) { return c_[c]; }
  double operator[](std::size_t c) const { return c_[c]; }
  std::span<const double> components() const { return {c_.data(), size()}; }

  double trace() const;

  SymMatrix& operator+=(const SymMatrix& other);
  SymMatrix& operator-=(const SymMatrix& other);
  SymMatrix& operator*=(double s);
  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
  friend SymMatrix operator*(double s, SymMatrix a) { return a *= s; }

  bool operator==(const SymMatrix&) const = default;

 private:
  int dim_ = 3;
  std::array<double, 6> c_{};
};

/// Norm over all dim^2 positions (off-diagonal entries count twice for l1).
double mat_norm(const SymMatrix& m, NormId id);

/// Full contraction sum_ij s_ij e_ij. Throws std::invalid_argument on dim mismatch.
double dual_pairing(const SymMatrix& s, const SymMatrix& e);

/// Zero-padded 3x3 embedding (plane-strain convention for 2D, uniaxial for 1D).
SymMatrix embed3(const SymMatrix& m);

/// (1/3) tr(m) I, computed on the 3x3 embedding.
SymMatrix proj_spherical(const SymMatrix& m);
/// m - proj_spherical(m), computed on the 3x3 embedding.
SymMatrix proj_deviatoric(const SymMatrix& m);

/// Yield seminorm |dev(s)|.
double yield_value(const SymMatrix& s, NormId stress_norm);

/// Dual of the yield seminorm, evaluated on a strain e:
///   min over c of mat_norm(embed3(e) + c I, strain_norm).
/// It is the exact dual of yield_value(., dual_norm_id(strain_norm)) on
/// traceless strains; callers are responsible for the trace condition.
double yield_dual_value(const SymMatrix& e, NormId strain_norm);

/// Vector norms used on boundary values.
double vec_norm(std::span<const double> v, NormId id);

}  // namespace loadcap
