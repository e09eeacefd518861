#include "finauv/allocation.hpp"

#include <cmath>
#include <stdexcept>

#include "finauv/dynamics.hpp"
#include "finauv/math_core.hpp"
#include "finauv/sqp.hpp"

namespace finauv {

AllocMethod alloc_method_from_string(const std::string& name) {
  if (name == "inv") return AllocMethod::kPseudoInverse;
  if (name == "opt") return AllocMethod::kOptimization;
  if (name == "prop") return AllocMethod::kProposed;
  throw std::invalid_argument("unknown allocation method: " + name);
}

std::string alloc_method_name(AllocMethod m) {
  switch (m) {
    case AllocMethod::kPseudoInverse: return "inv";
    case AllocMethod::kOptimization: return "opt";
    case AllocMethod::kProposed: return "prop";
  }
  return "?";
}

void AllocationConfig::validate() const {
  for (int nd : n_d) {
    if (nd != 2 && nd != 4) throw ModelError("allocation: n_d entries must be 2 or 4");
  }
  if (alpha_comp < 0.0) throw ModelError("allocation: alpha_comp must be >= 0");
  if (f_th_max <= 0.0) throw ModelError("allocation: f_th_max must be > 0");
}

Wrench forward_wrench(const AllocationResult& result, const FinGeometry& geom) {
  Wrench total;
  for (int i = 0; i < 4; ++i) {
    const Vec3 f_fin{std::cos(result.phi_0[i]) * result.f_th[i], 0.0,
                     std::sin(result.phi_0[i]) * result.f_th[i]};
    const Wrench w = fin_to_body(f_fin, geom, i);
    total.f += w.f;
    total.m += w.m;
  }
  return total;
}

Wrench forward_wrench_matrix(const AllocationResult& result, const FinGeometry& geom) {
  const double cp = std::cos(geom.psi_fin), sp = std::sin(geom.psi_fin);
  const double ma = geom.moment_arm();
  Vec4 c, s;
  for (int i = 0; i < 4; ++i) {
    c(i) = std::cos(result.phi_0[i]) * result.f_th[i];
    s(i) = std::sin(result.phi_0[i]) * result.f_th[i];
  }
  Vec6 tau;
  tau(0) = cp * (c(0) - c(1) - c(2) + c(3));
  tau(1) = sp * (c(0) + c(1) - c(2) - c(3));
  tau(2) = s(0) + s(1) + s(2) + s(3);
  tau(3) = geom.y_fin * (s(0) + s(1) - s(2) - s(3));
  tau(4) = geom.x_fin * (-s(0) + s(1) + s(2) - s(3));
  tau(5) = ma * (c(0) - c(1) + c(2) - c(3));
  return Wrench::from_stacked(tau);
}

double heaviside_gate(double tau_component, double sign_selector, int n_d) {
  if (n_d == 4) return tau_component;
  const double u = (sign_selector > 0.0 ? 1.0 : (sign_selector < 0.0 ? -1.0 : 0.0)) *
                   tau_component;
  return (u > 0.0) ? 2.0 * tau_component : 0.0;  // H(0) = 0
}

namespace {

// Two-fin selector for the heave gate (coefficient is +1 on every fin, so the
// pair choice is free; rear fins take positive heave).
constexpr std::array<double, 4> kHeaveSelector{-1.0, -1.0, +1.0, +1.0};

void finish_result(AllocationResult& r, const std::array<double, 4>& f_hor,
                   const std::array<double, 4>& f_ver, double f_comp,
                   const AllocationResult* prev) {
  for (int i = 0; i < 4; ++i) {
    const double h = f_comp + f_hor[i];
    const double v = f_ver[i];
    r.f_th[i] = 0.25 * std::hypot(h, v);
    r.phi_0[i] = (r.f_th[i] > 0.0) ? std::atan2(v, h) : 0.0;
    if (prev != nullptr) {
      r.phi_0[i] = unwrap_near(r.phi_0[i], prev->phi_0[i]);
    }
  }
}

}  // namespace

AllocationResult alloc_pseudo_inverse(const Wrench& tau_des, const FinGeometry& geom,
                                      const AllocationResult* prev) {
  const Vec6 tau = tau_des.stacked();
  const double cp = std::cos(geom.psi_fin), sp = std::sin(geom.psi_fin);
  const double ma = geom.moment_arm();
  std::array<double, 4> f_hor{}, f_ver{};
  for (int i = 0; i < 4; ++i) {
    f_hor[i] = FinGeometry::sc[i] * tau(0) / cp + FinGeometry::ss[i] * tau(1) / sp +
               FinGeometry::sa[i] * tau(5) / ma;
    f_ver[i] = tau(2) + FinGeometry::sy[i] * tau(3) / geom.y_fin -
               FinGeometry::sx[i] * tau(4) / geom.x_fin;
  }
  AllocationResult out;
  finish_result(out, f_hor, f_ver, 0.0, prev);
  out.iterations = 1;
  return out;
}

AllocationResult alloc_proposed(const Wrench& tau_des, const AllocationConfig& cfg,
                                const FinGeometry& geom,
                                const AllocationResult* prev) {
  const Vec6 tau = tau_des.stacked();
  const double cp = std::cos(geom.psi_fin), sp = std::sin(geom.psi_fin);
  const double ma = geom.moment_arm();

  std::array<double, 4> f_hor{}, f_ver{};
  for (int i = 0; i < 4; ++i) {
    const double c_i = FinGeometry::sc[i] * cp;
    const double s_i = FinGeometry::ss[i] * sp;
    const double arm_i = FinGeometry::sa[i] * ma;
    const double y_i = FinGeometry::sy[i] * geom.y_fin;
    const double x_i = FinGeometry::sx[i] * geom.x_fin;
    f_hor[i] = heaviside_gate(tau(0), c_i, cfg.n_d[0]) / c_i +
               heaviside_gate(tau(1), s_i, cfg.n_d[1]) / s_i +
               heaviside_gate(tau(5), arm_i, cfg.n_d[5]) / arm_i;
    f_ver[i] = heaviside_gate(tau(2), kHeaveSelector[i], cfg.n_d[2]) +
               heaviside_gate(tau(3), y_i, cfg.n_d[3]) / y_i +
               heaviside_gate(tau(4), -x_i, cfg.n_d[4]) / -x_i;
  }

  // Opposing horizontal forces cancel pairwise in the forward map; they keep
  // the atan2 denominator positive so vertical demands do not flip fins.
  double f_comp = 0.0;
  for (int j : {2, 4, 5}) {
    const double fnorm = std::abs(tau(j)) / cfg.f_th_max;
    f_comp += (1.0 - fnorm) * fnorm;
  }
  f_comp *= cfg.alpha_comp;

  AllocationResult out;
  finish_result(out, f_hor, f_ver, f_comp, prev);
  out.iterations = 1;
  return out;
}

AllocationResult alloc_optimization(const Wrench& tau_des, const AllocationConfig& cfg,
                                    const FinGeometry& geom,
                                    const AllocationResult* prev) {
  const double cp = std::cos(geom.psi_fin), sp = std::sin(geom.psi_fin);
  const double ma = geom.moment_arm();
  const Vec6 tau = tau_des.stacked();

  // z = [f(4), Gamma(4), Lambda(4)]
  Eigen::VectorXd lo(12), hi(12), obj(12);
  lo << 0, 0, 0, 0, -1, -1, -1, -1, -1, -1, -1, -1;
  hi << cfg.f_th_max, cfg.f_th_max, cfg.f_th_max, cfg.f_th_max, 1, 1, 1, 1, 1, 1, 1, 1;
  obj.setZero();
  obj.head<4>().setConstant(2.0);

  auto constraints = [&](const Eigen::VectorXd& z, Eigen::VectorXd& c,
                         Eigen::MatrixXd& A) {
    c.setZero();
    A.setZero();
    for (int i = 0; i < 4; ++i) {
      const double f = z(i), gam = z(4 + i), lam = z(8 + i);
      const double cx = cp * FinGeometry::sc[i];
      const double cy = sp * FinGeometry::ss[i];
      const double cpsi = ma * FinGeometry::sa[i];
      const double cph = geom.y_fin * FinGeometry::sy[i];
      const double cth = -geom.x_fin * FinGeometry::sx[i];
      c(0) += cx * gam * f;
      c(1) += cy * gam * f;
      c(2) += lam * f;
      c(3) += cph * lam * f;
      c(4) += cth * lam * f;
      c(5) += cpsi * gam * f;
      A(0, i) = cx * gam; A(0, 4 + i) = cx * f;
      A(1, i) = cy * gam; A(1, 4 + i) = cy * f;
      A(2, i) = lam;      A(2, 8 + i) = f;
      A(3, i) = cph * lam; A(3, 8 + i) = cph * f;
      A(4, i) = cth * lam; A(4, 8 + i) = cth * f;
      A(5, i) = cpsi * gam; A(5, 4 + i) = cpsi * f;
      c(6 + i) = gam * gam + lam * lam - 1.0;
      A(6 + i, 4 + i) = 2.0 * gam;
      A(6 + i, 8 + i) = 2.0 * lam;
    }
    c.head<6>() -= tau;
  };

  Eigen::VectorXd z0 = Eigen::VectorXd::Zero(12);
  // The all-zero start has a vanishing constraint Jacobian (bilinear terms):
  // point degenerate direction pairs at the rest zero-direction and nudge the
  // thrusts off the f = 0 saddle before iterating.
  for (int i = 0; i < 4; ++i) {
    if (z0(4 + i) * z0(4 + i) + z0(8 + i) * z0(8 + i) < 1e-12) z0(4 + i) = 1.0;
    if (z0(i) < 1e-2) z0(i) = 1e-2;
  }

  SqpProblem problem(12, 10, lo, hi, obj, constraints);
  SqpOptions opts;
  const SqpResult sol = problem.solve(z0, opts);

  AllocationResult out;
  for (int i = 0; i < 4; ++i) {
    out.f_th[i] = sol.z(i);
    out.phi_0[i] = std::atan2(sol.z(8 + i), sol.z(4 + i));
    if (out.f_th[i] <= 0.0) out.phi_0[i] = 0.0;
    if (prev != nullptr) out.phi_0[i] = unwrap_near(out.phi_0[i], prev->phi_0[i]);
  }
  out.iterations = sol.iterations;
  out.residual = sol.constraint_norm;
  out.feasible = sol.converged;
  return out;
}

AllocationResult allocate(AllocMethod method, const Wrench& tau_des,
                          const AllocationConfig& cfg, const FinGeometry& geom,
                          const AllocationResult* prev) {
  switch (method) {
    case AllocMethod::kPseudoInverse: return alloc_pseudo_inverse(tau_des, geom, prev);
    case AllocMethod::kOptimization: return alloc_optimization(tau_des, cfg, geom, prev);
    case AllocMethod::kProposed: return alloc_proposed(tau_des, cfg, geom, prev);
  }
  throw std::logic_error("allocate: bad method");
}

}  // namespace finauv
