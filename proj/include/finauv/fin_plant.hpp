#pragma once

#include <array>

#include "finauv/types.hpp"

namespace finauv {

/// Mounting geometry of the four fins. Fin i sits at
/// p_i = [sx_i * x_fin, sy_i * y_fin, 0] with rest-frame yaw psi_i such that
/// cos(psi_i) = sc_i * cos(psi_fin), sin(psi_i) = ss_i * sin(psi_fin).
/// The sign tables realize the X-shaped symmetric arrangement whose
/// pseudo-inverse allocation is exact (rows of the wrench map are orthogonal
/// with norm 2). sa_i = sx_i * ss_i is the sign of the fin's yaw moment arm.
struct FinGeometry {
  double x_fin{0.25};    // [m]
  double y_fin{0.20};    // [m]
  double psi_fin{M_PI / 4};  // [rad], magnitude of the rest-frame yaw
  double r_c{0.10};      // [m], rotation axis to paddle centroid
  double S_f{0.02};      // [m^2], projected paddle area

  static constexpr std::array<double, 4> sc{+1.0, -1.0, -1.0, +1.0};
  static constexpr std::array<double, 4> ss{+1.0, +1.0, -1.0, -1.0};
  static constexpr std::array<double, 4> sx{+1.0, -1.0, -1.0, +1.0};
  static constexpr std::array<double, 4> sy{+1.0, +1.0, -1.0, -1.0};
  static constexpr std::array<double, 4> sa{+1.0, -1.0, +1.0, -1.0};

  double moment_arm() const {
    return x_fin * std::sin(psi_fin) - y_fin * std::cos(psi_fin);
  }
  Vec3 fin_position(int i) const { return {sx[i] * x_fin, sy[i] * y_fin, 0.0}; }
  double cos_psi(int i) const { return sc[i] * std::cos(psi_fin); }
  double sin_psi(int i) const { return ss[i] * std::sin(psi_fin); }

  /// Throws ModelError if any allocation denominator degenerates.
  void validate() const;
};

/// Hydrodynamic constants of the paddle model and the thrust inverse model.
struct FinHydroCoeffs {
  double rho{997.0};       // [kg/m^3]
  double C_Lmax{1.65};
  double C_Dmax{3.2};
  double C_d{0.24};
  double omega_osc{4.0 * M_PI};  // [rad/s]

  /// Peak period-averaged thrust of the inverse model, K in f = K (1 - cos A).
  double thrust_scale(const FinGeometry& geom) const {
    const double rw = geom.r_c * omega_osc;
    return 2.0 * C_d * rho * geom.S_f * rw * rw;
  }
};

struct FinFlow {
  double U_f{0.0};        // [m/s] flow speed in the fin x-z plane
  double beta{0.0};       // [rad] flow direction, flow = U (sin b, 0, cos b)
  double alpha_aoa{0.0};  // [rad] signed angle between flow and paddle plane
};

/// Relative flow at the paddle centroid of fin `fin_index` (0..3):
/// paddle tangential velocity r_c * fin_rate minus the body velocity at the
/// mount point, expressed in the fin rest frame and projected on its x-z
/// plane. alpha_aoa is 0 when U_f < 1e-6 m/s.
FinFlow fin_flow(double fin_angle, double fin_rate, const Twist& body_twist,
                 const FinGeometry& geom, int fin_index);

struct FinForce {
  double fx{0.0};  // [N] fin rest frame, x
  double fz{0.0};  // [N] fin rest frame, z
};

/// Quasi-static lift/drag resolved into the fin rest frame:
///   L = 0.5 rho U^2 S_f C_Lmax sin(2 a), D = 0.5 rho U^2 S_f C_Dmax (1 - cos 2 a)
///   fx = D sin b + L cos b, fz = -L sin b + D cos b
FinForce fin_force(const FinFlow& flow, const FinHydroCoeffs& coeffs,
                   const FinGeometry& geom);

/// Cupped-blade jet reaction along the instantaneous paddle direction
/// d(angle) = [cos angle, 0, sin angle]. Calibrated (C = 4 C_d) so the
/// still-water period average of a harmonic stroke tracks the inverse model
/// f = K (1 - cos A) within ~11% over the amplitude range.
FinForce fin_stroke_thrust(double fin_angle, double fin_rate,
                           const FinHydroCoeffs& coeffs, const FinGeometry& geom);

/// Aggregate instantaneous body wrench of all four fins (adjoint maps of the
/// rest frames). fin_states holds (angle, rate) per fin.
Wrench plant_wrench(const std::array<std::pair<double, double>, 4>& fin_states,
                    const Twist& body_twist, const FinGeometry& geom,
                    const FinHydroCoeffs& coeffs);

/// Map a force vector in fin i's rest frame to a body wrench.
Wrench fin_to_body(const Vec3& f_fin, const FinGeometry& geom, int fin_index);

}  // namespace finauv
