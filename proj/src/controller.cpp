#include "finauv/controller.hpp"

#include <cmath>

namespace finauv {

void ControllerGains::validate() const {
  if ((K_p.array() <= 0.0).any() || k <= 0.0 || (K_d.array() <= 0.0).any() ||
      (Lambda.array() <= 0.0).any() || (Gamma.array() <= 0.0).any()) {
    throw ModelError("controller gains must be strictly positive");
  }
  if (hysteresis <= 0.0 || hysteresis >= 1.0) {
    throw ModelError("hysteresis half-width must be in (0, 1)");
  }
}

ConfigError config_error(const Pose& pose, const Pose& desired) {
  ConfigError err;
  err.p_e = quat_to_rot(desired.q).transpose() * (pose.p - desired.p);
  err.q_e = quat_mul(quat_conj(desired.q), pose.q);
  return err;
}

void reference_velocity(const Vec7& desired_rates, const Vec7& desired_accels,
                        const UnitQuaternion& q_d, Vec6& nu_r, Vec6& nu_r_dot) {
  const PoseJacobian pj = pose_jacobian(q_d);
  nu_r = pj.J_dagger * desired_rates;
  nu_r_dot = pj.J_dagger * desired_accels;
}

void potential_and_gradient(const ConfigError& err, int h, const ControllerGains& gains,
                            double& V_q, Vec6& dV_q) {
  V_q = 2.0 * gains.k * (1.0 - h * err.q_e.mu) +
        0.5 * err.p_e.dot(gains.K_p.cwiseProduct(err.p_e));
  dV_q.head<3>() = gains.K_p.cwiseProduct(err.p_e);
  dV_q.tail<3>() = gains.k * static_cast<double>(h) * err.q_e.eps;
}

int hybrid_flow_or_jump(const ConfigError& err, int h, const ControllerGains& gains,
                        bool* jumped) {
  const bool in_jump_set = h * err.q_e.mu <= -gains.hysteresis;
  if (jumped != nullptr) *jumped = in_jump_set;
  return in_jump_set ? -h : h;
}

Eigen::Matrix<double, 6, kNumTheta> regressor(const ConfigError& /*err*/,
                                              const Vec6& zeta_nu,
                                              const Vec6& zeta_nu_dot,
                                              const Vec6& /*delta*/, const Vec6& nu,
                                              const Vec6& nu_r, const Vec6& nu_r_dot,
                                              const UnitQuaternion& q) {
  Eigen::Matrix<double, 6, kNumTheta> phi;
  phi.setZero();

  const Vec6 nu_m = nu_r + zeta_nu;
  const Vec6 nu_m_dot = nu_r_dot + zeta_nu_dot;
  const Vec3 v = nu.head<3>();
  const Vec3 w = nu.tail<3>();
  const Vec3 v_m = nu_m.head<3>();
  const Vec3 w_m = nu_m.tail<3>();
  const Vec3 e3{0.0, 0.0, 1.0};
  const Mat3 rt = quat_to_rot(q).transpose();

  // Restoring terms.
  phi.block<3, 1>(0, 0) = -rt * e3;
  phi.block<3, 3>(3, 1) = -skew(e3) * rt;

  // Diagonal inertia terms: M e_j nudot_m plus the matching Coriolis column,
  // C = [[0, -[a]x], [-[a]x, -[b]x]] with a, b linear in theta.
  for (int j = 0; j < 3; ++j) {
    const Vec3 a = v(j) * Vec3::Unit(j);
    phi(j, 4 + j) += nu_m_dot(j);
    phi.block<3, 1>(0, 4 + j) += -a.cross(w_m);
    phi.block<3, 1>(3, 4 + j) += -a.cross(v_m);
  }
  for (int j = 0; j < 3; ++j) {
    const Vec3 b = w(j) * Vec3::Unit(j);
    phi(3 + j, 7 + j) += nu_m_dot(3 + j);
    phi.block<3, 1>(3, 7 + j) += -b.cross(w_m);
  }

  // Cross inertia term theta_11: M entries (0,4), (4,0), (1,3), (3,1).
  phi(0, 10) += nu_m_dot(4);
  phi(1, 10) += -nu_m_dot(3);
  phi(3, 10) += -nu_m_dot(1);
  phi(4, 10) += nu_m_dot(0);
  {
    const Vec3 a = -e3.cross(w);  // d a / d theta_11
    const Vec3 b = e3.cross(v);   // d b / d theta_11
    phi.block<3, 1>(0, 10) += -a.cross(w_m);
    phi.block<3, 1>(3, 10) += -a.cross(v_m) - b.cross(w_m);
  }

  // Damping: D = -diag(theta_12..17) - diag(theta_18..23) |nu|.
  for (int j = 0; j < 6; ++j) {
    phi(j, 11 + j) = -nu_m(j);
    phi(j, 17 + j) = -std::abs(nu(j)) * nu_m(j);
  }
  return phi;
}

namespace {

/// Componentwise projection scale: fades the update to zero across the
/// boundary layer outside [lower, upper]; identity strictly inside.
double projection_scale(double value, double update, double lower, double upper,
                        double layer) {
  if (update > 0.0 && value > upper) {
    return std::max(0.0, 1.0 - (value - upper) / layer);
  }
  if (update < 0.0 && value < lower) {
    return std::max(0.0, 1.0 - (lower - value) / layer);
  }
  return 1.0;
}

}  // namespace

Wrench controller_step(const Pose& pose, const Twist& twist,
                       const TrajectoryPoint& target, HybridControllerState& state,
                       const ControllerGains& gains, double dt) {
  const ConfigError err = config_error(pose, target.eta_d);

  bool jumped = false;
  state.h = hybrid_flow_or_jump(err, state.h, gains, &jumped);
  if (jumped) ++state.jump_count;

  double v_q = 0.0;
  Vec6 dv_q;
  potential_and_gradient(err, state.h, gains, v_q, dv_q);

  Vec6 nu_r, nu_r_dot;
  reference_velocity(target.eta_d_dot, target.eta_d_ddot, target.eta_d.q, nu_r,
                     nu_r_dot);

  const Vec6 lambda_inv = gains.Lambda.cwiseInverse();
  const Vec6 zeta_dot =
      -lambda_inv.cwiseProduct(dv_q + gains.K_d.cwiseProduct(state.zeta_nu));

  const Vec6 nu = twist.stacked();
  const Vec6 delta = nu - nu_r - state.zeta_nu;

  const auto phi = regressor(err, state.zeta_nu, zeta_dot, delta, nu, nu_r, nu_r_dot,
                             pose.q);
  const Vec6 tau = phi * state.theta_hat - dv_q - gains.K_d.cwiseProduct(delta);
  if (!tau.allFinite()) {
    throw EpisodeAbort("controller_step: non-finite control output");
  }

  // Exact zero-order-hold update of the linear zeta filter (stays stable for
  // the CA_inv gain set at the 20 Hz tick, where one Euler step would not).
  for (int i = 0; i < 6; ++i) {
    const double pole = gains.K_d(i) * lambda_inv(i);
    const double zinf = -dv_q(i) / gains.K_d(i);
    state.zeta_nu(i) = zinf + (state.zeta_nu(i) - zinf) * std::exp(-pole * dt);
  }

  const ThetaVector raw_update =
      -gains.Gamma.cwiseInverse().cwiseProduct(phi.transpose() * delta);
  for (int i = 0; i < kNumTheta; ++i) {
    const double scale =
        projection_scale(state.theta_hat(i), raw_update(i), gains.theta_lower(i),
                         gains.theta_upper(i), gains.theta_layer(i));
    double next = state.theta_hat(i) + dt * scale * raw_update(i);
    next = std::clamp(next, gains.theta_lower(i) - gains.theta_layer(i),
                      gains.theta_upper(i) + gains.theta_layer(i));
    state.theta_hat(i) = next;
  }

  return Wrench::from_stacked(tau);
}

}  // namespace finauv
