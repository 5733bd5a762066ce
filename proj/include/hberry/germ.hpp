#pragma once

#include <array>

#include "hberry/types.hpp"

namespace hberry {

/// Complex phase-space vector a = (W, Z): momentum part W, coordinate part Z.
struct GermVector {
  CVec3 W = CVec3::Zero();
  CVec3 Z = CVec3::Zero();

  CVec6 vector() const {
    CVec6 v;
    v << W, Z;
    return v;
  }
  static GermVector from_vector(const CVec6& v) { return {v.head<3>(), v.tail<3>()}; }
  GermVector conjugate() const { return {W.conjugate(), Z.conjugate()}; }
};

using GermBasis = std::array<GermVector, 3>;

/// Bilinear skew product {a, b} = ⟨a, Jᵀ b⟩ = ⟨W_a, Z_b⟩ − ⟨Z_a, W_b⟩. No conjugation.
inline cplx skew_product(const GermVector& a, const GermVector& b) {
  return a.W.cwiseProduct(b.Z).sum() - a.Z.cwiseProduct(b.W).sum();
}

inline cplx skew_product(const CVec6& a, const CVec6& b) {
  return a.head<3>().cwiseProduct(b.tail<3>()).sum() - a.tail<3>().cwiseProduct(b.head<3>()).sum();
}

/// Columns are the germ vectors.
inline CMat63 germ_matrix(const GermBasis& basis) {
  CMat63 m;
  for (int k = 0; k < 3; ++k) m.col(k) = basis[k].vector();
  return m;
}

inline GermBasis germ_basis_from_matrix(const CMat63& m) {
  return {GermVector::from_vector(m.col(0)), GermVector::from_vector(m.col(1)),
          GermVector::from_vector(m.col(2))};
}

/// max_{k,l} of |{a_k, a_l}| and |{a_k, a*_l} − 2i δ_kl|.
double skew_orthonormality_defect(const CMat63& a);

}  // namespace hberry
