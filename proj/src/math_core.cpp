#include "finauv/math_core.hpp"

#include <cmath>
#include <stdexcept>

namespace finauv {

Mat3 skew(const Vec3& a) {
  Mat3 s;
  s << 0.0, -a.z(), a.y(),
       a.z(), 0.0, -a.x(),
      -a.y(), a.x(), 0.0;
  return s;
}

UnitQuaternion quat_mul(const UnitQuaternion& q1, const UnitQuaternion& q2) {
  UnitQuaternion out;
  out.mu = q1.mu * q2.mu - q1.eps.dot(q2.eps);
  out.eps = q1.mu * q2.eps + q2.mu * q1.eps + q1.eps.cross(q2.eps);
  return out.normalized();
}

UnitQuaternion quat_conj(const UnitQuaternion& q) { return {q.mu, -q.eps}; }

Mat3 quat_to_rot(const UnitQuaternion& q) {
  const Mat3 ex = skew(q.eps);
  return Mat3::Identity() + 2.0 * q.mu * ex + 2.0 * ex * ex;
}

Mat43 rate_matrix(const UnitQuaternion& q) {
  Mat43 t;
  t.row(0) = -q.eps.transpose();
  t.block<3, 3>(1, 0) = q.mu * Mat3::Identity() + skew(q.eps);
  return 0.5 * t;
}

PoseJacobian pose_jacobian(const UnitQuaternion& q) {
  PoseJacobian out;
  const Mat3 r = quat_to_rot(q);
  const Mat43 t = rate_matrix(q);
  out.J.setZero();
  out.J.block<3, 3>(0, 0) = r;
  out.J.block<4, 3>(3, 3) = t;
  out.J_dagger.setZero();
  out.J_dagger.block<3, 3>(0, 0) = r.transpose();
  out.J_dagger.block<3, 4>(3, 3) = 4.0 * t.transpose();
  return out;
}

UnitQuaternion euler_to_quat(double phi, double theta, double psi) {
  const UnitQuaternion qz{std::cos(psi / 2), Vec3{0, 0, std::sin(psi / 2)}};
  const UnitQuaternion qy{std::cos(theta / 2), Vec3{0, std::sin(theta / 2), 0}};
  const UnitQuaternion qx{std::cos(phi / 2), Vec3{std::sin(phi / 2), 0, 0}};
  return quat_mul(quat_mul(qz, qy), qx);
}

Vec3 quat_to_euler(const UnitQuaternion& q) {
  const Mat3 r = quat_to_rot(q);
  const double pitch = std::asin(std::clamp(-r(2, 0), -1.0, 1.0));
  double roll, yaw;
  if (std::abs(r(2, 0)) < 1.0 - 1e-12) {
    roll = std::atan2(r(2, 1), r(2, 2));
    yaw = std::atan2(r(1, 0), r(0, 0));
  } else {
    roll = std::atan2(-r(1, 2), r(1, 1));
    yaw = 0.0;
  }
  return {roll, pitch, yaw};
}

Vec3 euler_rates_to_body(double phi, double theta, const Vec3& euler_rates) {
  if (std::abs(theta) >= M_PI / 2 - 1e-6) {
    throw std::domain_error("euler_rates_to_body: pitch too close to gimbal lock");
  }
  const double cphi = std::cos(phi), sphi = std::sin(phi);
  const double cth = std::cos(theta), sth = std::sin(theta);
  Mat3 e;
  e << 1.0, 0.0, -sth,
       0.0, cphi, cth * sphi,
       0.0, -sphi, cth * cphi;
  return e * euler_rates;
}

UnitQuaternion quat_integrate(const UnitQuaternion& q, const Vec3& w, double dt) {
  const Vec4 dq = rate_matrix(q) * w;
  UnitQuaternion out;
  out.mu = q.mu + dt * dq(0);
  out.eps = q.eps + dt * dq.tail<3>();
  return out.normalized();
}

double wrap_angle(double a) {
  a = std::fmod(a + M_PI, 2.0 * M_PI);
  if (a <= 0.0) a += 2.0 * M_PI;
  return a - M_PI;
}

double unwrap_near(double angle, double reference) {
  return angle + 2.0 * M_PI * std::round((reference - angle) / (2.0 * M_PI));
}

}  // namespace finauv
