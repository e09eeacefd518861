#pragma once

#include <Eigen/Dense>

namespace finauv {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Vec7 = Eigen::Matrix<double, 7, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat43 = Eigen::Matrix<double, 4, 3>;
using Mat76 = Eigen::Matrix<double, 7, 6>;
using Mat67 = Eigen::Matrix<double, 6, 7>;

/// Unit quaternion q = (mu, eps), Hamilton convention, scalar first.
/// Producing operations renormalize so that |q| stays within 1e-9 of 1.
struct UnitQuaternion {
  double mu{1.0};
  Vec3 eps{0.0, 0.0, 0.0};

  UnitQuaternion() = default;
  UnitQuaternion(double mu_, const Vec3& eps_) : mu(mu_), eps(eps_) {}

  static UnitQuaternion identity() { return {}; }

  double norm() const { return std::sqrt(mu * mu + eps.squaredNorm()); }

  /// Scale to unit length. Degenerate near-zero input falls back to identity.
  UnitQuaternion normalized() const {
    const double n = norm();
    if (n < 1e-12) return identity();
    return {mu / n, eps / n};
  }

  Vec4 coeffs() const { return Vec4{mu, eps.x(), eps.y(), eps.z()}; }
};

/// Position + attitude in the inertial frame.
struct Pose {
  Vec3 p{0.0, 0.0, 0.0};
  UnitQuaternion q{};
};

/// Body-frame linear and angular velocity.
struct Twist {
  Vec3 v{0.0, 0.0, 0.0};
  Vec3 w{0.0, 0.0, 0.0};

  Vec6 stacked() const {
    Vec6 out;
    out << v, w;
    return out;
  }
  static Twist from_stacked(const Vec6& nu) { return {nu.head<3>(), nu.tail<3>()}; }
};

/// Body-frame force and torque.
struct Wrench {
  Vec3 f{0.0, 0.0, 0.0};
  Vec3 m{0.0, 0.0, 0.0};

  Vec6 stacked() const {
    Vec6 out;
    out << f, m;
    return out;
  }
  static Wrench from_stacked(const Vec6& tau) { return {tau.head<3>(), tau.tail<3>()}; }
};

}  // namespace finauv
