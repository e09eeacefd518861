#pragma once

#include "finauv/dynamics.hpp"
#include "finauv/guidance_types.hpp"
#include "finauv/math_core.hpp"

namespace finauv {

/// Configuration error in the desired frame: p_e = R(q_d)^T (p - p_d),
/// q_e = q_d^-1 (x) q.
struct ConfigError {
  Vec3 p_e{0.0, 0.0, 0.0};
  UnitQuaternion q_e{};
};

struct ControllerGains {
  Vec3 K_p{3.81, 3.39, 3.76};
  double k{3.93};
  Vec6 K_d{(Vec6() << 3.46, 4.59, 4.41, 2.01, 3.39, 4.68).finished()};
  Vec6 Lambda{Vec6::Ones()};
  ThetaVector Gamma{ThetaVector::Ones()};
  double hysteresis{0.1};  // varsigma
  ThetaVector theta_lower{theta_default_lower()};
  ThetaVector theta_upper{theta_default_upper()};
  ThetaVector theta_layer{theta_default_layer()};

  void validate() const;
};

struct HybridControllerState {
  Vec6 zeta_nu{Vec6::Zero()};
  ThetaVector theta_hat{theta_default_start()};
  int h{1};
  int jump_count{0};
};

ConfigError config_error(const Pose& pose, const Pose& desired);

/// nu_r = J_dagger(q_d) etadot_d and its rate under the slow-rotation
/// assumption.
void reference_velocity(const Vec7& desired_rates, const Vec7& desired_accels,
                        const UnitQuaternion& q_d, Vec6& nu_r, Vec6& nu_r_dot);

/// V_q = 2k (1 - h mu_e) + 1/2 p_e^T diag(K_p) p_e and its gradient
/// dV_q = [diag(K_p) p_e; k h eps_e].
void potential_and_gradient(const ConfigError& err, int h, const ControllerGains& gains,
                            double& V_q, Vec6& dV_q);

/// Hysteretic switch: jump (h -> -h) iff h mu_e <= -varsigma. Returns the
/// updated h; `jumped` reports whether a jump fired.
int hybrid_flow_or_jump(const ConfigError& err, int h, const ControllerGains& gains,
                        bool* jumped = nullptr);

/// 6x23 regressor: Phi(..) theta = M(theta) nudot_m + C(theta, nu) nu_m
///                                 + D(theta, nu) nu_m + g(theta, q)
/// identically in theta, with nu_m = nu_r + zeta_nu, nudot_m = nu_r_dot + zetadot_nu.
Eigen::Matrix<double, 6, kNumTheta> regressor(const ConfigError& err, const Vec6& zeta_nu,
                                              const Vec6& zeta_nu_dot, const Vec6& delta,
                                              const Vec6& nu, const Vec6& nu_r,
                                              const Vec6& nu_r_dot,
                                              const UnitQuaternion& q);

/// One 20 Hz control tick: jump logic, reference-velocity error flow, adaptive
/// update with componentwise boundary-layer projection, and the control law
/// tau = Phi theta_hat - dV_q - diag(K_d) delta.
Wrench controller_step(const Pose& pose, const Twist& twist,
                       const TrajectoryPoint& target, HybridControllerState& state,
                       const ControllerGains& gains, double dt);

}  // namespace finauv
