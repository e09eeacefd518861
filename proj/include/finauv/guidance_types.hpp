#pragma once

#include "finauv/types.hpp"

namespace finauv {

/// Desired pose with consistent first and second derivatives
/// (qdot = T(q) w chain; accelerations under the slow-rotation assumption).
struct TrajectoryPoint {
  Pose eta_d{};
  Vec7 eta_d_dot{Vec7::Zero()};
  Vec7 eta_d_ddot{Vec7::Zero()};
};

}  // namespace finauv
