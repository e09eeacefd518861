#pragma once

#include <string>

#include "finauv/guidance_types.hpp"
#include "finauv/math_core.hpp"

namespace finauv {

enum class Scenario { k6T, k3T2S };
enum class TrajectoryShape { kEllipse, kLissajous };

Scenario scenario_from_string(const std::string& s);
TrajectoryShape shape_from_string(const std::string& s);
std::string to_string(Scenario s);
std::string to_string(TrajectoryShape s);

struct TrajectoryParams {
  double A_x{1.5}, A_y{1.5}, A_z{0.3};        // [m]
  double w_x{0.03}, w_y{0.03}, w_z{0.03};     // [rad/s]
  double l_x{1.0}, l_y{1.0};                  // Lissajous multipliers
  double x0{0.3}, y0{0.3}, z0{0.3};           // [m]
  double c_phi{0.1};                          // roll rate coefficient [rad/s]
  double t_star{0.1};                         // lookahead [s]
  double gamma1{7.0}, gamma2{1.0};            // filter gains [1/s]
  Scenario scenario{Scenario::k6T};
  TrajectoryShape shape{TrajectoryShape::kEllipse};

  void validate() const;
};

/// Analytic path point [x, y, z, roll, pitch, yaw] at time t. 3T2S yaw is the
/// line-of-sight heading from the live robot position to the lookahead point;
/// a degenerate lookahead holds the previous heading.
class SetpointGenerator {
 public:
  explicit SetpointGenerator(const TrajectoryParams& params) : params_(params) {}

  Vec6 analytic_setpoint(double t, const Vec2& robot_xy);

 private:
  Vec3 path_position(double t) const;

  TrajectoryParams params_;
  double last_yaw_{0.0};
  double last_pitch_{0.0};
  bool have_last_{false};
};

/// Two cascaded critically damped second-order filters producing desired
/// pose, velocity and acceleration from the raw analytic setpoint. The yaw
/// channel is filtered in the unwrapped domain.
class TrajectoryFilter {
 public:
  TrajectoryFilter(const TrajectoryParams& params, const Vec6& initial);

  void step(const Vec6& eta_p, double dt);

  const Vec6& eta_d() const { return eta_d_; }
  const Vec6& eta_d_dot() const { return eta_d_dot_; }
  const Vec6& eta_d_ddot() const { return eta_d_ddot_; }

 private:
  double gamma1_, gamma2_;
  Vec6 stage1_, stage1_dot_;
  Vec6 eta_d_, eta_d_dot_, eta_d_ddot_;
};

/// Assemble the quaternion-form trajectory point from the filtered Euler-form
/// setpoint and its derivatives.
TrajectoryPoint to_trajectory_point(const Vec6& eta_d, const Vec6& eta_d_dot,
                                    const Vec6& eta_d_ddot);

/// Convenience wrapper chaining setpoint generation, filtering and conversion.
class Guidance {
 public:
  Guidance(const TrajectoryParams& params, const Vec2& robot_xy_initial);

  TrajectoryPoint step(double t, const Vec2& robot_xy, double dt);
  Vec6 initial_setpoint() const { return initial_; }

 private:
  SetpointGenerator generator_;
  TrajectoryFilter filter_;
  Vec6 initial_;
};

}  // namespace finauv
