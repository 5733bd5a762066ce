#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "hberry/parameters.hpp"
#include "hberry/spectral.hpp"

namespace hberry {

using Exponent = std::array<unsigned, 3>;

/// Sparse polynomial in ζ ∈ ℂ³ with complex coefficients.
class MultiIndexPolynomial {
 public:
  MultiIndexPolynomial() = default;
  static MultiIndexPolynomial constant(cplx c);

  const std::map<Exponent, cplx>& terms() const noexcept { return terms_; }
  cplx coefficient(const Exponent& e) const;
  unsigned degree() const;
  bool empty() const noexcept { return terms_.empty(); }

  MultiIndexPolynomial derivative(int axis) const;
  /// Multiplies by the linear form Σ_j row_j ζ_j.
  MultiIndexPolynomial times_linear(const CVec3& row) const;
  MultiIndexPolynomial& operator+=(const MultiIndexPolynomial& other);
  MultiIndexPolynomial& operator*=(cplx c);

  cplx evaluate(const CVec3& zeta) const;

  void add(const Exponent& e, cplx c);

 private:
  std::map<Exponent, cplx> terms_;
};

/// He_ν(ζ) = (−1)^{|ν|} (∂/∂ζ − 2Wζ)^ν · 1 for a symmetric W.
MultiIndexPolynomial hermite_poly(const CMat3& W, const FockIndex& nu);

struct SpatialGrid {
  std::array<double, 3> lower{-6.0, -6.0, -6.0};
  std::array<double, 3> upper{6.0, 6.0, 6.0};
  std::array<int, 3> points{64, 64, 64};

  void check() const;
  std::size_t size() const;
  double spacing(int axis) const;
  double cell_volume() const;
  Vec3 point(std::size_t flat_index) const;
  friend bool operator==(const SpatialGrid&, const SpatialGrid&) = default;
};

struct ComplexField {
  SpatialGrid grid;
  std::vector<cplx> values;  // x fastest, then y, then z
};

/// Pointwise evaluator of the stationary Hartree eigenfunction ψ_ν(x, R).
class FockState {
 public:
  FockState(const ParameterSet& R, const FockIndex& nu, const PhysicalConstants& constants);

  cplx operator()(const Vec3& x) const;
  const MultiIndexPolynomial& hermite() const noexcept { return poly_; }
  cplx normalization() const noexcept { return norm_; }

 private:
  Mat3 G_;
  CVec3 q0_;       // diagonal of Q_0 in frame coordinates
  CMat3 xi_map_;   // ξ = xi_map · (Gᵀx)
  MultiIndexPolynomial poly_;
  cplx norm_;
  double hbar_;
};

cplx fock_state_at(const ParameterSet& R, const FockIndex& nu, const Vec3& x, const PhysicalConstants& constants);

/// Samples ψ_ν on a grid, evaluating z-slabs on up to `threads` workers (0 → hardware concurrency).
ComplexField fock_state(const ParameterSet& R, const FockIndex& nu, const SpatialGrid& grid,
                        const PhysicalConstants& constants, unsigned threads = 0);

/// exp{−i Σ_k (Ω_k + Ω̃_k)(ν_k + ½) t}.
cplx vacuum_time_factor(const ParameterSet& R, const FockIndex& nu, const PhysicalConstants& constants, double t);

/// Σ f* g · cell volume. Throws GridMismatch for different grids.
cplx grid_overlap(const ComplexField& f, const ComplexField& g);
double grid_norm(const ComplexField& f);

struct GridMoments {
  Vec3 mean = Vec3::Zero();
  Mat3 covariance = Mat3::Zero();
  double mass = 0.0;  // ∫|ψ|²
};

/// First and second position moments of |ψ|², normalized by its grid mass.
GridMoments grid_moments(const ComplexField& f);

/// Rows "x,y,z,re,im" with a header line, %.17g.
std::string field_to_csv(const ComplexField& f);
/// {"grid": {...}, "values": [re0, im0, re1, im1, ...]}.
std::string field_to_json(const ComplexField& f);

}  // namespace hberry
