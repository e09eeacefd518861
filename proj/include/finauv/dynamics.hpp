#pragma once

#include <array>
#include <stdexcept>

#include "finauv/math_core.hpp"
#include "finauv/types.hpp"

namespace finauv {

/// Raised for unusable model configuration (singular inertia, bad parameters).
struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when an episode must stop (non-finite state or command).
struct EpisodeAbort : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// 23-parameter vehicle model vector.
///   theta[0]      restoring force magnitude [N]
///   theta[1..3]   restoring torque parameters [N m]
///   theta[4..9]   diagonal inertia terms [kg, kg m^2]
///   theta[10]     inertia cross term [kg m]
///   theta[11..16] linear damping (<= 0)
///   theta[17..22] quadratic damping (<= 0)
using ThetaVector = Eigen::Matrix<double, 23, 1>;

constexpr int kNumTheta = 23;

/// Default plant / adaptive starting parameters.
ThetaVector theta_default_start();
ThetaVector theta_default_lower();
ThetaVector theta_default_upper();
ThetaVector theta_default_layer();

/// Check plant-use invariants: positive-definite inertia diagonal, damping <= 0.
void validate_plant_theta(const ThetaVector& theta);

struct PlantState {
  Pose pose{};
  Twist twist{};
  double time{0.0};
};

struct ModelMatrices {
  Mat6 M;
  Mat6 C;
  Mat6 D;
  Vec6 g;
};

/// Inertia, Coriolis, damping and restoring terms of the 6-DOF model.
/// M is symmetric and linear in theta; C satisfies nu^T C(nu) nu = 0.
ModelMatrices model_matrices(const ThetaVector& theta, const Twist& nu,
                             const UnitQuaternion& q);

struct StateDeriv {
  Vec7 pose_rate;   // [pdot(3), qdot(4)]
  Vec6 twist_rate;  // [vdot(3), wdot(3)]
};

/// nudot = M^-1 (tau - C nu - D nu - g); etadot = J(q) nu.
/// Throws ModelError when det(M) < 1e-12.
StateDeriv dynamics_deriv(const PlantState& state, const ThetaVector& theta,
                          const Wrench& tau);

/// Classical RK4 over the 13-dim state [p, q, v, w]; quaternion renormalized
/// once after the step. Throws EpisodeAbort on a non-finite result.
PlantState rk4_step(const PlantState& state, const ThetaVector& theta,
                    const Wrench& tau, double dt);

/// Plant with the inertia factorization cached; steps share one theta.
class Plant {
 public:
  Plant(const ThetaVector& theta, const PlantState& initial);

  void step(const Wrench& tau, double dt);
  const PlantState& state() const { return state_; }
  const ThetaVector& theta() const { return theta_; }

 private:
  ThetaVector theta_;
  PlantState state_;
};

}  // namespace finauv
