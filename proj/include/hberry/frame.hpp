#pragma once

#include "hberry/parameters.hpp"
#include "hberry/types.hpp"

namespace hberry {

/// Spherical frame attached to the magnetic field direction:
///   e_n     = (cosφ sinθ, sinφ sinθ, cosθ)
///   e_phi   = (sinφ, −cosφ, 0)
///   e_theta = (cosφ cosθ, sinφ cosθ, −sinθ)
/// with e_phi × e_theta = e_n.
struct MagneticFrame {
  Vec3 e_n;
  Vec3 e_phi;
  Vec3 e_theta;
  double theta = 0.0;  // (0, π)
  double phi = 0.0;    // [0, 2π)
  double H_mag = 0.0;
};

/// G = (e_phi, e_theta, e_n) as columns; maps frame coordinates to lab coordinates.
struct FrameRotation {
  Mat3 G;
};

struct FrameTolerances {
  double axis_tolerance = 1e-9;  // minimum sinθ
  double zero_field_tolerance = 1e-12;
};

MagneticFrame magnetic_frame(const Vec3& H, const FrameTolerances& tol = {});
FrameRotation build_G(const MagneticFrame& frame);

/// Slow-time derivatives of the frame, projected on the frame.
struct FrameRates {
  double dphi_theta = 0.0;  // ⟨e_phi', e_theta⟩
  double dtheta_phi = 0.0;  // ⟨e_theta', e_phi⟩ = −⟨e_phi', e_theta⟩
  double dn_phi = 0.0;      // ⟨e_n', e_phi⟩
  double dn_theta = 0.0;    // ⟨e_n', e_theta⟩
  double theta_rate = 0.0;  // θ'
  double phi_rate = 0.0;    // φ' (continuous; integrates to the unwrapped azimuth)

  /// ⟨e_phi', e_theta⟩ − ⟨e_theta', e_phi⟩, the rotation rate about e_n entering φ'_{1,2}.
  double twist() const { return dphi_theta - dtheta_phi; }
};

/// Chain rule through θ(H), φ(H) given H and dH/ds.
FrameRates frame_rates(const Vec3& H, const Vec3& dH, const FrameTolerances& tol = {});
FrameRates frame_rates(const ParameterLoop& loop, double s, const FrameTolerances& tol = {});

}  // namespace hberry
