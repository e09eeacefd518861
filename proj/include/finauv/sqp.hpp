#pragma once

#include <functional>

#include "finauv/types.hpp"

namespace finauv {

/// Small dense SQP for equality-constrained problems with box bounds:
///   min f(z)  s.t.  c(z) = 0,  lo <= z <= hi
/// Quadratic objective data and constraint values/Jacobians are supplied by
/// callbacks. Steps come from a regularized KKT system with an l1-merit
/// backtracking line search; iterates are clamped to the box.
struct SqpOptions {
  int max_iterations{200};
  double tol_constraint{1e-6};
  double tol_stationarity{1e-6};
  double hessian_damping{1e-3};
  double kkt_regularization{1e-9};
};

struct SqpResult {
  Eigen::VectorXd z;
  int iterations{0};
  double constraint_norm{0.0};
  bool converged{false};
};

class SqpProblem {
 public:
  using ConstraintFn =
      std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&, Eigen::MatrixXd&)>;

  SqpProblem(int num_vars, int num_constraints, Eigen::VectorXd lower,
             Eigen::VectorXd upper, Eigen::VectorXd grad_weights,
             ConstraintFn constraints)
      : n_(num_vars),
        m_(num_constraints),
        lo_(std::move(lower)),
        hi_(std::move(upper)),
        obj_diag_(std::move(grad_weights)),
        constraints_(std::move(constraints)) {}

  /// Objective is 0.5 * z^T diag(obj_diag) z (sufficient for the allocation
  /// problem; the diagonal doubles as the exact Hessian).
  SqpResult solve(const Eigen::VectorXd& z0, const SqpOptions& opts) const;

 private:
  int n_;
  int m_;
  Eigen::VectorXd lo_;
  Eigen::VectorXd hi_;
  Eigen::VectorXd obj_diag_;
  ConstraintFn constraints_;
};

}  // namespace finauv
