#pragma once

#include "finauv/types.hpp"

namespace finauv {

/// Skew-symmetric matrix such that skew(a) * b = a x b.
Mat3 skew(const Vec3& a);

/// Hamilton product q1 (x) q2, renormalized.
UnitQuaternion quat_mul(const UnitQuaternion& q1, const UnitQuaternion& q2);

/// Conjugate (mu, -eps); equals the inverse for unit quaternions.
UnitQuaternion quat_conj(const UnitQuaternion& q);

/// Rotation matrix R(q) = I + 2 mu [eps]x + 2 [eps]x^2.
Mat3 quat_to_rot(const UnitQuaternion& q);

/// Quaternion rate matrix T(q) = 1/2 [-eps^T; mu I + [eps]x], so qdot = T(q) w.
Mat43 rate_matrix(const UnitQuaternion& q);

/// Pose Jacobian J = blockdiag(R(q), T(q)) and its left inverse
/// J_dagger = blockdiag(R(q)^T, 4 T(q)^T); J_dagger * J = I6.
struct PoseJacobian {
  Mat76 J;
  Mat67 J_dagger;
};
PoseJacobian pose_jacobian(const UnitQuaternion& q);

/// ZYX (yaw-pitch-roll) Euler angles to quaternion.
UnitQuaternion euler_to_quat(double phi, double theta, double psi);

/// ZYX Euler extraction (roll, pitch, yaw) from a unit quaternion.
Vec3 quat_to_euler(const UnitQuaternion& q);

/// Body angular velocity from ZYX Euler angle rates, w = E(phi, theta) * rates.
/// Throws std::domain_error when |theta| >= pi/2 - 1e-6 (gimbal proximity).
Vec3 euler_rates_to_body(double phi, double theta, const Vec3& euler_rates);

/// Integrate qdot = T(q) w over dt (first order) and renormalize.
UnitQuaternion quat_integrate(const UnitQuaternion& q, const Vec3& w, double dt);

/// Wrap an angle to (-pi, pi].
double wrap_angle(double a);

/// Shift `angle` by multiples of 2 pi to land nearest `reference`.
double unwrap_near(double angle, double reference);

}  // namespace finauv
