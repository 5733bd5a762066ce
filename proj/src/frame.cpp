#include "hberry/frame.hpp"

#include <algorithm>
#include <cmath>

namespace hberry {

namespace {

void check_field(const Vec3& H, const FrameTolerances& tol) {
  const double Hmag = H.norm();
  if (!(Hmag > tol.zero_field_tolerance)) throw Error(ErrorCode::ZeroField, "magnetic field vanishes");
  const double sin_theta = std::hypot(H.x(), H.y()) / Hmag;
  if (!(sin_theta > tol.axis_tolerance))
    throw Error(ErrorCode::AxisSingularity, "magnetic field is on the polar axis; frame undefined");
}

}  // namespace

MagneticFrame magnetic_frame(const Vec3& H, const FrameTolerances& tol) {
  check_field(H, tol);
  MagneticFrame f;
  f.H_mag = H.norm();
  f.theta = std::acos(std::clamp(H.z() / f.H_mag, -1.0, 1.0));
  f.phi = std::atan2(H.y(), H.x());
  if (f.phi < 0.0) f.phi += kTwoPi;
  if (f.phi >= kTwoPi) f.phi -= kTwoPi;

  const double ct = std::cos(f.theta), st = std::sin(f.theta);
  const double cp = std::cos(f.phi), sp = std::sin(f.phi);
  f.e_n = Vec3(cp * st, sp * st, ct);
  f.e_phi = Vec3(sp, -cp, 0.0);
  f.e_theta = Vec3(cp * ct, sp * ct, -st);
  return f;
}

FrameRotation build_G(const MagneticFrame& frame) {
  FrameRotation r;
  r.G.col(0) = frame.e_phi;
  r.G.col(1) = frame.e_theta;
  r.G.col(2) = frame.e_n;
  return r;
}

FrameRates frame_rates(const Vec3& H, const Vec3& dH, const FrameTolerances& tol) {
  check_field(H, tol);
  const double H2 = H.squaredNorm();
  const double perp2 = H.x() * H.x() + H.y() * H.y();
  const double perp = std::sqrt(perp2);
  const double Hmag = std::sqrt(H2);
  const double cos_theta = H.z() / Hmag;
  const double sin_theta = perp / Hmag;

  FrameRates r;
  r.phi_rate = (H.x() * dH.y() - H.y() * dH.x()) / perp2;
  // d(cosθ)/ds = (H3' |H|² − H3 ⟨H, H'⟩)/|H|³ = −sinθ θ'
  r.theta_rate = -(dH.z() * H2 - H.z() * H.dot(dH)) / (H2 * perp);

  // e_phi' = φ'(cosθ e_theta + sinθ e_n), e_theta' = −θ' e_n − φ' cosθ e_phi,
  // e_n' = θ' e_theta − φ' sinθ e_phi.
  r.dphi_theta = r.phi_rate * cos_theta;
  r.dtheta_phi = -r.phi_rate * cos_theta;
  r.dn_phi = -r.phi_rate * sin_theta;
  r.dn_theta = r.theta_rate;
  return r;
}

FrameRates frame_rates(const ParameterLoop& loop, double s, const FrameTolerances& tol) {
  const ParameterSample smp = loop.sample(s);
  return frame_rates(smp.value.H, smp.rate.H, tol);
}

}  // namespace hberry
