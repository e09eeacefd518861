#include "finauv/guidance.hpp"

#include <cmath>
#include <stdexcept>

#include "finauv/dynamics.hpp"

namespace finauv {

Scenario scenario_from_string(const std::string& s) {
  if (s == "6T") return Scenario::k6T;
  if (s == "3T2S") return Scenario::k3T2S;
  throw std::invalid_argument("unknown scenario: " + s);
}

TrajectoryShape shape_from_string(const std::string& s) {
  if (s == "ellipse") return TrajectoryShape::kEllipse;
  if (s == "lissajous") return TrajectoryShape::kLissajous;
  throw std::invalid_argument("unknown trajectory shape: " + s);
}

std::string to_string(Scenario s) { return s == Scenario::k6T ? "6T" : "3T2S"; }
std::string to_string(TrajectoryShape s) {
  return s == TrajectoryShape::kEllipse ? "ellipse" : "lissajous";
}

void TrajectoryParams::validate() const {
  if (A_x <= 0 || A_y <= 0 || A_z <= 0 || w_x <= 0 || w_y <= 0 || w_z <= 0 ||
      gamma1 <= 0 || gamma2 <= 0 || t_star <= 0) {
    throw ModelError("trajectory params: amplitudes, frequencies, gammas and t* must be positive");
  }
}

Vec3 SetpointGenerator::path_position(double t) const {
  const double lx = (params_.shape == TrajectoryShape::kLissajous) ? params_.l_x : 1.0;
  const double ly = (params_.shape == TrajectoryShape::kLissajous) ? params_.l_y : 1.0;
  return {params_.A_x * (-std::cos(lx * params_.w_x * t) + 1.0) + params_.x0,
          params_.A_y * std::sin(ly * params_.w_y * t) + params_.y0,
          params_.A_z * (-std::cos(params_.w_z * t) + 1.0) + params_.z0};
}

Vec6 SetpointGenerator::analytic_setpoint(double t, const Vec2& robot_xy) {
  Vec6 eta_p;
  const Vec3 p = path_position(t);
  eta_p.head<3>() = p;

  if (params_.scenario == Scenario::k3T2S) {
    eta_p(3) = 0.0;
    eta_p(4) = 0.0;
    const Vec3 ahead = path_position(t + params_.t_star);
    const double dy = ahead.y() - robot_xy.y();
    const double dx = ahead.x() - robot_xy.x();
    double yaw = have_last_ ? last_yaw_ : 0.0;
    if (std::hypot(dx, dy) >= 1e-9) yaw = std::atan2(dy, dx);
    eta_p(5) = yaw;
    last_yaw_ = yaw;
    have_last_ = true;
    return eta_p;
  }

  // 6T: roll ramps at c_phi; pitch and yaw point along the path lookahead.
  eta_p(3) = params_.c_phi * t;
  const Vec3 delta = path_position(t + params_.t_star) - p;
  double pitch = have_last_ ? last_pitch_ : 0.0;
  double yaw = have_last_ ? last_yaw_ : 0.0;
  if (delta.norm() >= 1e-9) {
    pitch = M_PI / 2 -
            std::acos(std::clamp(-delta.z() / delta.norm(), -1.0, 1.0));
    yaw = std::atan2(delta.y(), delta.x());
  }
  eta_p(4) = pitch;
  eta_p(5) = yaw;
  last_pitch_ = pitch;
  last_yaw_ = yaw;
  have_last_ = true;
  return eta_p;
}

TrajectoryFilter::TrajectoryFilter(const TrajectoryParams& params, const Vec6& initial)
    : gamma1_(params.gamma1),
      gamma2_(params.gamma2),
      stage1_(initial),
      stage1_dot_(Vec6::Zero()),
      eta_d_(initial),
      eta_d_dot_(Vec6::Zero()),
      eta_d_ddot_(Vec6::Zero()) {}

void TrajectoryFilter::step(const Vec6& eta_p, double dt) {
  Vec6 input = eta_p;
  // Shortest-angle innovation keeps yaw continuous through +-pi wraps.
  input(5) = unwrap_near(input(5), stage1_(5));

  const Vec6 acc1 =
      -2.0 * gamma1_ * stage1_dot_ - gamma1_ * gamma1_ * (stage1_ - input);
  eta_d_ddot_ = -2.0 * gamma2_ * eta_d_dot_ - gamma2_ * gamma2_ * (eta_d_ - stage1_);

  stage1_ += dt * stage1_dot_;
  stage1_dot_ += dt * acc1;
  eta_d_ += dt * eta_d_dot_;
  eta_d_dot_ += dt * eta_d_ddot_;
}

TrajectoryPoint to_trajectory_point(const Vec6& eta_d, const Vec6& eta_d_dot,
                                    const Vec6& eta_d_ddot) {
  TrajectoryPoint out;
  out.eta_d.p = eta_d.head<3>();
  out.eta_d.q = euler_to_quat(eta_d(3), eta_d(4), eta_d(5));

  const Vec3 w_d = euler_rates_to_body(eta_d(3), eta_d(4), eta_d_dot.tail<3>());
  out.eta_d_dot.head<3>() = eta_d_dot.head<3>();
  out.eta_d_dot.tail<4>() = rate_matrix(out.eta_d.q) * w_d;

  // Slow-rotation assumption: freeze E and T(q) for the second derivative.
  const Vec3 w_d_dot = euler_rates_to_body(eta_d(3), eta_d(4), eta_d_ddot.tail<3>());
  out.eta_d_ddot.head<3>() = eta_d_ddot.head<3>();
  out.eta_d_ddot.tail<4>() = rate_matrix(out.eta_d.q) * w_d_dot;
  return out;
}

Guidance::Guidance(const TrajectoryParams& params, const Vec2& robot_xy_initial)
    : generator_(params),
      filter_(params, Vec6::Zero()),
      initial_(Vec6::Zero()) {
  params.validate();
  SetpointGenerator warmup(params);
  initial_ = warmup.analytic_setpoint(0.0, robot_xy_initial);
  filter_ = TrajectoryFilter(params, initial_);
}

TrajectoryPoint Guidance::step(double t, const Vec2& robot_xy, double dt) {
  const Vec6 eta_p = generator_.analytic_setpoint(t, robot_xy);
  filter_.step(eta_p, dt);
  return to_trajectory_point(filter_.eta_d(), filter_.eta_d_dot(), filter_.eta_d_ddot());
}

}  // namespace finauv
