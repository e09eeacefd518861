#include "finauv/fin_plant.hpp"

#include <cmath>

#include "finauv/dynamics.hpp"
#include "finauv/math_core.hpp"

namespace finauv {

void FinGeometry::validate() const {
  if (std::abs(std::sin(psi_fin)) < 1e-9 || std::abs(std::cos(psi_fin)) < 1e-9) {
    throw ModelError("fin geometry: psi_fin must keep sin and cos nonzero");
  }
  if (std::abs(moment_arm()) < 1e-9) {
    throw ModelError("fin geometry: yaw moment arm M_a is degenerate");
  }
}

namespace {

Mat3 fin_rest_rotation(const FinGeometry& geom, int i) {
  const double c = geom.cos_psi(i);
  const double s = geom.sin_psi(i);
  Mat3 r;
  r << c, -s, 0.0,
       s, c, 0.0,
       0.0, 0.0, 1.0;
  return r;
}

}  // namespace

FinFlow fin_flow(double fin_angle, double fin_rate, const Twist& body_twist,
                 const FinGeometry& geom, int fin_index) {
  const Vec3 mount_vel_body =
      body_twist.v + body_twist.w.cross(geom.fin_position(fin_index));
  const Vec3 mount_vel_fin =
      fin_rest_rotation(geom, fin_index).transpose() * mount_vel_body;

  // Paddle normal in the rest frame x-z plane; blade points down at angle 0.
  const double nx = -std::cos(fin_angle);
  const double nz = -std::sin(fin_angle);
  const double flow_x = -mount_vel_fin.x() + geom.r_c * fin_rate * nx;
  const double flow_z = -mount_vel_fin.z() + geom.r_c * fin_rate * nz;

  FinFlow out;
  out.U_f = std::hypot(flow_x, flow_z);
  if (out.U_f < 1e-6) {
    return out;  // no flow, no force
  }
  out.beta = std::atan2(flow_x, flow_z);

  // Blade direction angle in the same (x, z) convention is -fin_angle.
  double a = wrap_angle(out.beta + fin_angle);
  if (a > M_PI / 2) a -= M_PI;
  if (a <= -M_PI / 2) a += M_PI;
  out.alpha_aoa = a;
  return out;
}

FinForce fin_force(const FinFlow& flow, const FinHydroCoeffs& coeffs,
                   const FinGeometry& geom) {
  const double q_dyn = 0.5 * coeffs.rho * flow.U_f * flow.U_f * geom.S_f;
  const double lift = q_dyn * coeffs.C_Lmax * std::sin(2.0 * flow.alpha_aoa);
  const double drag = q_dyn * coeffs.C_Dmax * (1.0 - std::cos(2.0 * flow.alpha_aoa));
  const double sb = std::sin(flow.beta);
  const double cb = std::cos(flow.beta);
  return {drag * sb + lift * cb, -lift * sb + drag * cb};
}

FinForce fin_stroke_thrust(double fin_angle, double fin_rate,
                           const FinHydroCoeffs& coeffs, const FinGeometry& geom) {
  const double u = geom.r_c * fin_rate;
  const double mag = 0.5 * coeffs.rho * geom.S_f * (4.0 * coeffs.C_d) * u * u;
  return {mag * std::cos(fin_angle), mag * std::sin(fin_angle)};
}

Wrench fin_to_body(const Vec3& f_fin, const FinGeometry& geom, int fin_index) {
  const Vec3 f_body = fin_rest_rotation(geom, fin_index) * f_fin;
  return {f_body, geom.fin_position(fin_index).cross(f_body)};
}

Wrench plant_wrench(const std::array<std::pair<double, double>, 4>& fin_states,
                    const Twist& body_twist, const FinGeometry& geom,
                    const FinHydroCoeffs& coeffs) {
  Wrench total;
  for (int i = 0; i < 4; ++i) {
    const auto [angle, rate] = fin_states[i];
    const FinFlow flow = fin_flow(angle, rate, body_twist, geom, i);
    const FinForce hydro = fin_force(flow, coeffs, geom);
    const FinForce prop = fin_stroke_thrust(angle, rate, coeffs, geom);
    const Wrench w = fin_to_body(
        Vec3{hydro.fx + prop.fx, 0.0, hydro.fz + prop.fz}, geom, i);
    total.f += w.f;
    total.m += w.m;
  }
  return total;
}

}  // namespace finauv
