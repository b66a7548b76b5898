#pragma once

#include <Eigen/Core>
#include <Eigen/SVD>

#include <cmath>

#include "splatvi/common.hpp"

// SE(3) / se(3) primitives.
//
// Twist ordering is [rho; phi]: translational tangent coordinates first,
// rotational last. Perturbations compose on the right, T = Tbar * exp(dxi^),
// and all tangent covariances live in that right tangent space.

namespace splatvi {

template <typename S>
using Vec3T = Eigen::Matrix<S, 3, 1>;
template <typename S>
using Vec6T = Eigen::Matrix<S, 6, 1>;
template <typename S>
using Mat3T = Eigen::Matrix<S, 3, 3>;
template <typename S>
using Mat4T = Eigen::Matrix<S, 4, 4>;
template <typename S>
using Mat6T = Eigen::Matrix<S, 6, 6>;

namespace detail {
// Rodrigues coefficients sin(t)/t, (1-cos(t))/t^2, (t-sin(t))/t^3 with a
// 4th-order Taylor fallback below the small-angle threshold.
template <typename S>
constexpr S kSmallAngle = S(1e-8);

template <typename S>
inline void rodrigues_coeffs(S theta, S& a, S& b, S& c) {
  const S t2 = theta * theta;
  if (theta < kSmallAngle<S>) {
    a = S(1) - t2 / S(6) + t2 * t2 / S(120);
    b = S(0.5) - t2 / S(24) + t2 * t2 / S(720);
    c = S(1) / S(6) - t2 / S(120) + t2 * t2 / S(5040);
  } else {
    a = std::sin(theta) / theta;
    b = (S(1) - std::cos(theta)) / t2;
    c = (theta - std::sin(theta)) / (t2 * theta);
  }
}
}  // namespace detail

template <typename S>
inline Mat3T<S> skew(const Vec3T<S>& v) {
  Mat3T<S> m;
  m << S(0), -v.z(), v.y(),
       v.z(), S(0), -v.x(),
      -v.y(), v.x(), S(0);
  return m;
}

inline Mat3 skew(const Vec3& v) { return skew<double>(v); }

/// 4x4 matrix form of a twist: [skew(phi), rho; 0, 0].
template <typename S>
inline Mat4T<S> wedge(const Vec6T<S>& xi) {
  Mat4T<S> m = Mat4T<S>::Zero();
  m.template topLeftCorner<3, 3>() = skew<S>(xi.template tail<3>());
  m.template topRightCorner<3, 1>() = xi.template head<3>();
  return m;
}

inline Mat4 wedge(const Vec6& xi) { return wedge<double>(xi); }

template <typename S>
struct RigidTransformT {
  Mat3T<S> R = Mat3T<S>::Identity();
  Vec3T<S> t = Vec3T<S>::Zero();
  // Compositions since the last re-orthonormalization of R.
  std::uint16_t compositions = 0;

  static constexpr std::uint16_t kReorthonormalizeEvery = 100;

  static RigidTransformT Identity() { return RigidTransformT{}; }

  RigidTransformT inverse() const {
    RigidTransformT out;
    out.R = R.transpose();
    out.t = -(out.R * t);
    out.compositions = compositions;
    return out;
  }

  RigidTransformT operator*(const RigidTransformT& rhs) const {
    RigidTransformT out;
    out.R = R * rhs.R;
    out.t = R * rhs.t + t;
    out.compositions =
        static_cast<std::uint16_t>(std::max(compositions, rhs.compositions) + 1);
    if (out.compositions >= kReorthonormalizeEvery) out.reorthonormalize();
    return out;
  }

  // Projects R back onto SO(3) (polar decomposition via SVD).
  void reorthonormalize() {
    Eigen::JacobiSVD<Mat3T<S>> svd(R, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat3T<S> d = Mat3T<S>::Identity();
    d(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < S(0)
                  ? S(-1)
                  : S(1);
    R = svd.matrixU() * d * svd.matrixV().transpose();
    compositions = 0;
  }
};

using RigidTransform = RigidTransformT<double>;

/// Frame action: T applied to a point, R*p + t.
template <typename S>
inline Vec3T<S> act(const RigidTransformT<S>& T, const Vec3T<S>& p) {
  return T.R * p + T.t;
}

template <typename S>
inline RigidTransformT<S> exp_se3(const Vec6T<S>& xi) {
  const Vec3T<S> rho = xi.template head<3>();
  const Vec3T<S> phi = xi.template tail<3>();
  const S theta = phi.norm();
  S a, b, c;
  detail::rodrigues_coeffs(theta, a, b, c);
  const Mat3T<S> K = skew<S>(phi);
  const Mat3T<S> K2 = K * K;
  RigidTransformT<S> T;
  T.R = Mat3T<S>::Identity() + a * K + b * K2;
  // Left Jacobian of SO(3) applied to the translational part.
  const Mat3T<S> V = Mat3T<S>::Identity() + b * K + c * K2;
  T.t = V * rho;
  return T;
}

inline RigidTransform exp_se3(const Vec6& xi) { return exp_se3<double>(xi); }

template <typename S>
inline Vec6T<S> log_se3(const RigidTransformT<S>& T) {
  const Vec3T<S> w(T.R(2, 1) - T.R(1, 2), T.R(0, 2) - T.R(2, 0),
                   T.R(1, 0) - T.R(0, 1));
  const S cos_theta = std::min(S(1), std::max(S(-1), (T.R.trace() - S(1)) / S(2)));
  const S sin_theta = std::min(S(1), w.norm() / S(2));
  const S theta = std::atan2(sin_theta, cos_theta);
  constexpr S pi = S(EIGEN_PI);
  if (theta >= pi - S(1e-6))
    throw AngleNearPi("log_se3: rotation angle within 1e-6 of pi");

  Vec3T<S> phi;
  if (theta < detail::kSmallAngle<S>) {
    phi = S(0.5) * w;
  } else {
    phi = (theta / (S(2) * std::sin(theta))) * w;
  }

  // V^{-1} with Taylor fallback for the theta^-2 coefficient.
  const Mat3T<S> K = skew<S>(phi);
  S d;
  if (theta < detail::kSmallAngle<S>) {
    const S t2 = theta * theta;
    d = S(1) / S(12) + t2 / S(720) + t2 * t2 / S(30240);
  } else {
    d = (S(1) - theta * std::sin(theta) / (S(2) * (S(1) - std::cos(theta)))) /
        (theta * theta);
  }
  const Mat3T<S> Vinv = Mat3T<S>::Identity() - S(0.5) * K + d * (K * K);
  Vec6T<S> xi;
  xi.template head<3>() = Vinv * T.t;
  xi.template tail<3>() = phi;
  return xi;
}

/// Jacobian of T |-> (Tbar * exp(dxi^)) applied to mu, at dxi = 0.
/// Columns follow the twist ordering: [Rbar | -Rbar * skew(mu)].
template <typename S>
inline Eigen::Matrix<S, 3, 6> pose_jacobian(const RigidTransformT<S>& T_bar,
                                            const Vec3T<S>& mu) {
  Eigen::Matrix<S, 3, 6> G;
  G.template leftCols<3>() = T_bar.R;
  G.template rightCols<3>() = -T_bar.R * skew<S>(mu);
  return G;
}

/// Adjoint of T for the [rho; phi] ordering: Ad = [R, skew(t)R; 0, R].
template <typename S>
inline Mat6T<S> adjoint(const RigidTransformT<S>& T) {
  Mat6T<S> ad = Mat6T<S>::Zero();
  ad.template topLeftCorner<3, 3>() = T.R;
  ad.template topRightCorner<3, 3>() = skew<S>(T.t) * T.R;
  ad.template bottomRightCorner<3, 3>() = T.R;
  return ad;
}

template <typename S>
inline Mat4T<S> homogeneous(const RigidTransformT<S>& T) {
  Mat4T<S> m = Mat4T<S>::Identity();
  m.template topLeftCorner<3, 3>() = T.R;
  m.template topRightCorner<3, 1>() = T.t;
  return m;
}

}  // namespace splatvi
