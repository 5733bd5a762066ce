#pragma once

#include <array>
#include <complex>

#include <Eigen/Dense>

namespace hberry {

using cplx = std::complex<double>;

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

using CVec3 = Eigen::Vector3cd;
using CMat3 = Eigen::Matrix3cd;
using CVec6 = Eigen::Matrix<cplx, 6, 1>;
using CMat6 = Eigen::Matrix<cplx, 6, 6>;
using CMat63 = Eigen::Matrix<cplx, 6, 3>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr cplx kI{0.0, 1.0};

/// Symplectic unit J = [[0, -I], [I, 0]] in (p, x) ordering.
inline Mat6 symplectic_unit() {
  Mat6 j = Mat6::Zero();
  j.block<3, 3>(0, 3) = -Mat3::Identity();
  j.block<3, 3>(3, 0) = Mat3::Identity();
  return j;
}

}  // namespace hberry
