#include "finauv/dynamics.hpp"

#include <cmath>

namespace finauv {

ThetaVector theta_default_start() {
  ThetaVector t;
  t << 0.0, 0.0, 0.0, 0.0,
      50.0, 50.0, 50.0,
      1.0, 1.0, 1.0,
      0.1,
      -5.0, -50.0, -10.0, 0.0, 0.0, -0.5,
      -10.0, -100.0, -200.0, -1.0, -1.0, -0.1;
  return t;
}

ThetaVector theta_default_lower() {
  ThetaVector t;
  t << -2.0, -1.0, -1.0, -1.0,
      0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
      -5.0,
      -10.0, -50.0, -10.0, -5.0, -5.0, -0.5,
      -50.0, -500.0, -500.0, -2.0, -5.0, -1.0;
  return t;
}

ThetaVector theta_default_upper() {
  ThetaVector t;
  t << 2.0, 1.0, 1.0, 1.0,
      100.0, 100.0, 100.0,
      5.0, 5.0, 5.0, 5.0,
      0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
      0.0, 0.0, 0.0, 0.0, 0.0, 0.0;
  return t;
}

ThetaVector theta_default_layer() {
  ThetaVector t;
  t << 0.1, 0.1, 0.1, 0.1,
      10.0, 10.0, 10.0,
      0.5, 0.5, 0.5,
      0.1,
      1.0, 1.0, 1.0, 0.1, 0.1, 0.1,
      5.0, 10.0, 10.0, 0.1, 0.1, 0.1;
  return t;
}

void validate_plant_theta(const ThetaVector& theta) {
  for (int i = 4; i < 10; ++i) {
    if (theta(i) <= 0.0) throw ModelError("plant theta: inertia terms must be positive");
  }
  for (int i = 11; i < 23; ++i) {
    if (theta(i) > 0.0) throw ModelError("plant theta: damping terms must be <= 0");
  }
}

ModelMatrices model_matrices(const ThetaVector& theta, const Twist& nu,
                             const UnitQuaternion& q) {
  ModelMatrices out;
  const Vec3 e3{0.0, 0.0, 1.0};

  out.M.setZero();
  out.M(0, 0) = theta(4);
  out.M(1, 1) = theta(5);
  out.M(2, 2) = theta(6);
  out.M(3, 3) = theta(7);
  out.M(4, 4) = theta(8);
  out.M(5, 5) = theta(9);
  out.M(0, 4) = theta(10);
  out.M(4, 0) = theta(10);
  out.M(1, 3) = -theta(10);
  out.M(3, 1) = -theta(10);

  // C from the inertia blocks: a = M11 v + M12 w, b = M21 v + M22 w.
  const Vec3 m_diag_lin{theta(4), theta(5), theta(6)};
  const Vec3 m_diag_ang{theta(7), theta(8), theta(9)};
  const Vec3 a = m_diag_lin.cwiseProduct(nu.v) - theta(10) * e3.cross(nu.w);
  const Vec3 b = theta(10) * e3.cross(nu.v) + m_diag_ang.cwiseProduct(nu.w);
  out.C.setZero();
  out.C.block<3, 3>(0, 3) = -skew(a);
  out.C.block<3, 3>(3, 0) = -skew(a);
  out.C.block<3, 3>(3, 3) = -skew(b);

  Vec6 lin_damp, quad_damp;
  lin_damp << theta(11), theta(12), theta(13), theta(14), theta(15), theta(16);
  quad_damp << theta(17), theta(18), theta(19), theta(20), theta(21), theta(22);
  const Vec6 nu6 = nu.stacked();
  out.D = (-lin_damp - quad_damp.cwiseProduct(nu6.cwiseAbs())).asDiagonal();

  const Mat3 rt = quat_to_rot(q).transpose();
  out.g.head<3>() = -rt * e3 * theta(0);
  out.g.tail<3>() = -skew(e3) * rt * theta.segment<3>(1);
  return out;
}

StateDeriv dynamics_deriv(const PlantState& state, const ThetaVector& theta,
                          const Wrench& tau) {
  const ModelMatrices mm = model_matrices(theta, state.twist, state.pose.q);
  if (std::abs(mm.M.determinant()) < 1e-12) {
    throw ModelError("dynamics: singular inertia matrix");
  }
  const Vec6 nu = state.twist.stacked();
  const Vec6 rhs = tau.stacked() - mm.C * nu - mm.D * nu - mm.g;
  StateDeriv out;
  out.twist_rate = mm.M.ldlt().solve(rhs);
  out.pose_rate.head<3>() = quat_to_rot(state.pose.q) * state.twist.v;
  out.pose_rate.tail<4>() = rate_matrix(state.pose.q) * state.twist.w;
  return out;
}

namespace {

using State13 = Eigen::Matrix<double, 13, 1>;

State13 pack(const PlantState& s) {
  State13 y;
  y << s.pose.p, s.pose.q.coeffs(), s.twist.v, s.twist.w;
  return y;
}

PlantState unpack(const State13& y, double time) {
  PlantState s;
  s.pose.p = y.head<3>();
  s.pose.q = UnitQuaternion{y(3), y.segment<3>(4)};
  s.twist.v = y.segment<3>(7);
  s.twist.w = y.tail<3>();
  s.time = time;
  return s;
}

State13 deriv13(const State13& y, double time, const ThetaVector& theta,
                const Wrench& tau) {
  const StateDeriv d = dynamics_deriv(unpack(y, time), theta, tau);
  State13 out;
  out << d.pose_rate, d.twist_rate;
  return out;
}

}  // namespace

PlantState rk4_step(const PlantState& state, const ThetaVector& theta,
                    const Wrench& tau, double dt) {
  const State13 y0 = pack(state);
  const State13 k1 = deriv13(y0, state.time, theta, tau);
  const State13 k2 = deriv13(y0 + 0.5 * dt * k1, state.time + 0.5 * dt, theta, tau);
  const State13 k3 = deriv13(y0 + 0.5 * dt * k2, state.time + 0.5 * dt, theta, tau);
  const State13 k4 = deriv13(y0 + dt * k3, state.time + dt, theta, tau);
  const State13 y1 = y0 + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!y1.allFinite()) {
    throw EpisodeAbort("rk4_step: non-finite state at t = " + std::to_string(state.time));
  }
  PlantState out = unpack(y1, state.time + dt);
  out.pose.q = out.pose.q.normalized();
  return out;
}

Plant::Plant(const ThetaVector& theta, const PlantState& initial)
    : theta_(theta), state_(initial) {
  validate_plant_theta(theta_);
}

void Plant::step(const Wrench& tau, double dt) {
  state_ = rk4_step(state_, theta_, tau, dt);
}

}  // namespace finauv
