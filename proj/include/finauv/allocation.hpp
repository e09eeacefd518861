#pragma once

#include <array>
#include <string>

#include "finauv/fin_plant.hpp"

namespace finauv {

enum class AllocMethod { kPseudoInverse, kOptimization, kProposed };

AllocMethod alloc_method_from_string(const std::string& name);
std::string alloc_method_name(AllocMethod m);

/// Per-DOF fin-count selector (2 or 4) for surge, sway, heave, roll, pitch,
/// yaw, plus the proposed method's compensation weight and thrust cap.
struct AllocationConfig {
  std::array<int, 6> n_d{2, 2, 4, 4, 4, 2};
  double alpha_comp{30.0};
  double f_th_max{5.0};
  AllocMethod method{AllocMethod::kProposed};

  void validate() const;
};

struct AllocationResult {
  std::array<double, 4> f_th{};    // [N], >= 0 by construction
  std::array<double, 4> phi_0{};   // [rad], unwrapped against the previous call
  int iterations{0};
  double residual{0.0};
  bool feasible{true};
};

/// Body wrench produced by per-fin thrusts along their zero directions
/// (adjoint composition of the fin rest frames).
Wrench forward_wrench(const AllocationResult& result, const FinGeometry& geom);

/// The same map assembled directly from the 6x8 matrix system; used as the
/// second algebraic route in tests.
Wrench forward_wrench_matrix(const AllocationResult& result, const FinGeometry& geom);

/// Heaviside fin-pair gate: pass-through for n_d = 4, and
/// 2 H(sign(s) tau) tau for n_d = 2, with H(0) = 0.
double heaviside_gate(double tau_component, double sign_selector, int n_d);

/// Moore-Penrose solution; all four fins always active; exact roundtrip.
AllocationResult alloc_pseudo_inverse(const Wrench& tau_des, const FinGeometry& geom,
                                      const AllocationResult* prev = nullptr);

/// Analytic solution with Heaviside fin selection and horizontal force
/// compensation; exact roundtrip in the unsaturated regime.
AllocationResult alloc_proposed(const Wrench& tau_des, const AllocationConfig& cfg,
                                const FinGeometry& geom,
                                const AllocationResult* prev = nullptr);

/// SQP solution of min f^T f subject to the six wrench equalities,
/// Gamma_i^2 + Lambda_i^2 = 1 and box constraints. Non-convergence returns
/// the best iterate flagged infeasible.
AllocationResult alloc_optimization(const Wrench& tau_des, const AllocationConfig& cfg,
                                    const FinGeometry& geom,
                                    const AllocationResult* prev = nullptr);

AllocationResult allocate(AllocMethod method, const Wrench& tau_des,
                          const AllocationConfig& cfg, const FinGeometry& geom,
                          const AllocationResult* prev = nullptr);

}  // namespace finauv
