#include "loadcap/matnorm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace loadcap {

std::string_view to_string(NormId id) {
  switch (id) {
    case NormId::EntrywiseOne:
      return "l1";
    case NormId::EntrywiseInf:
      return "linf";
  }
  throw std::invalid_argument("unknown norm id");
}

NormId parse_norm_id(std::string_view text) {
  if (text == "l1") return NormId::EntrywiseOne;
  if (text == "linf") return NormId::EntrywiseInf;
  throw std::invalid_argument("unknown norm id '" + std::string(text) +
                              "' (allowed: l1, linf)");
}

NormId dual_norm_id(NormId id) {
  switch (id) {
    case NormId::EntrywiseOne:
      return NormId::EntrywiseInf;
    case NormId::EntrywiseInf:
      return NormId::EntrywiseOne;
  }
  throw std::invalid_argument("unknown norm id");
}

SymMatrix::SymMatrix(int dim) : dim_(dim) {
  if (dim < 1 || dim > 3) {
    throw std::invalid_argument("SymMatrix dimension must be 1, 2 or 3");
  }
}

SymMatrix SymMatrix::identity(int dim) {
  SymMatrix m(dim);
  for (int i = 0; i < dim; ++i) m.c_[static_cast<std::size_t>(i)] = 1.0;
  return m;
}

SymMatrix SymMatrix::diagonal(double a, double b, double c) {
  SymMatrix m(3);
  m.c_[0] = a;
  m.c_[1] = b;
  m.c_[2] = c;
  return m;
}

std::array<int, 2> SymMatrix::position(int dim, std::size_t component) {
  const int k = static_cast<int>(component);
  if (k < dim) return {k, k};
  if (dim == 2) return {0, 1};
  // dim 3 off-diagonals: 3 -> (1,2), 4 -> (0,2), 5 -> (0,1)
  switch (k) {
    case 3:
      return {1, 2};
    case 4:
      return {0, 2};
    case 5:
      return {0, 1};
    default:
      throw std::out_of_range("SymMatrix component index out of range");
  }
}

std::size_t SymMatrix::component_index(int dim, int i, int j) {
  if (i < 0 || j < 0 || i >= dim || j >= dim) {
    throw std::out_of_range("SymMatrix index out of range");
  }
  if (i == j) return static_cast<std::size_t>(i);
  if (i > j) std::swap(i, j);
  if (dim == 2) return 2;
  return static_cast<std::size_t>(6 - i - j);  // (1,2)->3, (0,2)->4, (0,1)->5
}

double SymMatrix::operator()(int i, int j) const {
  return c_[component_index(dim_, i, j)];
}

double& SymMatrix::at(int i, int j) { return c_[component_index(dim_, i, j)]; }

double SymMatrix::trace() const {
  double t = 0.0;
  for (int i = 0; i < dim_; ++i) t += c_[static_cast<std::size_t>(i)];
  return t;
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& other) {
  if (other.dim_ != dim_) throw std::invalid_argument("SymMatrix dimension mismatch");
  for (std::size_t k = 0; k < size(); ++k) c_[k] += other.c_[k];
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& other) {
  if (other.dim_ != dim_) throw std::invalid_argument("SymMatrix dimension mismatch");
  for (std::size_t k = 0; k < size(); ++k) c_[k] -= other.c_[k];
  return *this;
}

SymMatrix& SymMatrix::operator*=(double s) {
  for (std::size_t k = 0; k < size(); ++k) c_[k] *= s;
  return *this;
}

double mat_norm(const SymMatrix& m, NormId id) {
  double acc = 0.0;
  for (std::size_t k = 0; k < m.size(); ++k) {
    const double a = std::abs(m[k]);
    if (id == NormId::EntrywiseOne) {
      acc += SymMatrix::multiplicity(m.dim(), k) * a;
    } else {
      acc = std::max(acc, a);
    }
  }
  return acc;
}

double dual_pairing(const SymMatrix& s, const SymMatrix& e) {
  if (s.dim() != e.dim()) {
    throw std::invalid_argument("dual_pairing: dimension mismatch");
  }
  double acc = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    acc += SymMatrix::multiplicity(s.dim(), k) * s[k] * e[k];
  }
  return acc;
}

SymMatrix embed3(const SymMatrix& m) {
  if (m.dim() == 3) return m;
  SymMatrix out(3);
  for (int i = 0; i < m.dim(); ++i) {
    for (int j = i; j < m.dim(); ++j) out.at(i, j) = m(i, j);
  }
  return out;
}

SymMatrix proj_spherical(const SymMatrix& m) {
  return (m.trace() / 3.0) * SymMatrix::identity(3);
}

SymMatrix proj_deviatoric(const SymMatrix& m) {
  return embed3(m) - proj_spherical(m);
}

double yield_value(const SymMatrix& s, NormId stress_norm) {
  return mat_norm(proj_deviatoric(s), stress_norm);
}

double yield_dual_value(const SymMatrix& e, NormId strain_norm) {
  const SymMatrix m = embed3(e);
  std::array<double, 3> d{m[0], m[1], m[2]};
  std::sort(d.begin(), d.end());
  double diag = 0.0;
  double off = 0.0;
  if (strain_norm == NormId::EntrywiseOne) {
    // sum |d_i + c| is minimized at c = -median
    diag = std::abs(d[0] - d[1]) + std::abs(d[2] - d[1]);
    for (std::size_t k = 3; k < 6; ++k) off += 2.0 * std::abs(m[k]);
    return diag + off;
  }
  // max |d_i + c| is minimized at the midpoint of the diagonal range
  diag = 0.5 * (d[2] - d[0]);
  for (std::size_t k = 3; k < 6; ++k) off = std::max(off, std::abs(m[k]));
  return std::max(diag, off);
}

double vec_norm(std::span<const double> v, NormId id) {
  double acc = 0.0;
  for (double x : v) {
    if (id == NormId::EntrywiseOne) {
      acc += std::abs(x);
    } else {
      acc = std::max(acc, std::abs(x));
    }
  }
  return acc;
}

}  // namespace loadcap
