#include "finauv/sqp.hpp"

#include <algorithm>
#include <cmath>

namespace finauv {

SqpResult SqpProblem::solve(const Eigen::VectorXd& z0, const SqpOptions& opts) const {
  Eigen::VectorXd z = z0.cwiseMax(lo_).cwiseMin(hi_);
  Eigen::VectorXd c(m_);
  Eigen::MatrixXd A(m_, n_);

  // Scale-free diagonal model for the tangential step (objective curvature,
  // floored at 1 for the curvature-free direction variables).
  const Eigen::VectorXd scale = obj_diag_.cwiseMax(1.0);

  SqpResult best;
  best.z = z;
  best.constraint_norm = std::numeric_limits<double>::infinity();
  int stalled = 0;

  for (int it = 0; it < opts.max_iterations; ++it) {
    constraints_(z, c, A);
    double cnorm = c.lpNorm<Eigen::Infinity>();
    const Eigen::VectorXd grad = obj_diag_.cwiseProduct(z);

    if (cnorm < best.constraint_norm) {
      best.z = z;
      best.constraint_norm = cnorm;
      best.iterations = it;
    }

    Eigen::MatrixXd aat = A * A.transpose();
    aat.diagonal().array() += opts.kkt_regularization;
    const Eigen::LLT<Eigen::MatrixXd> aat_llt(aat);
    const Eigen::VectorXd lambda = aat_llt.solve(A * grad);
    Eigen::VectorXd g_t = grad - A.transpose() * lambda;

    if (cnorm <= opts.tol_constraint) {
      Eigen::VectorXd r = g_t;
      for (int i = 0; i < n_; ++i) {
        if (z(i) <= lo_(i) + 1e-10 && r(i) > 0.0) r(i) = 0.0;
        if (z(i) >= hi_(i) - 1e-10 && r(i) < 0.0) r(i) = 0.0;
      }
      if (r.lpNorm<Eigen::Infinity>() <= opts.tol_stationarity) {
        SqpResult out;
        out.z = z;
        out.iterations = it;
        out.constraint_norm = cnorm;
        out.converged = true;
        return out;
      }
    }

    bool progressed = false;

    // Normal phase: Gauss-Newton restoration of the linearized constraints,
    // backtracking on the violation alone.
    if (cnorm > 0.0) {
      Eigen::VectorXd dn = -A.transpose() * aat_llt.solve(c);
      const double dn_max = dn.lpNorm<Eigen::Infinity>();
      if (dn_max > 1.0) dn *= 1.0 / dn_max;
      const double c1 = c.lpNorm<1>();
      double alpha = 1.0;
      for (int ls = 0; ls < 30; ++ls) {
        const Eigen::VectorXd z_try = (z + alpha * dn).cwiseMax(lo_).cwiseMin(hi_);
        constraints_(z_try, c, A);
        if (c.lpNorm<1>() < c1 - 1e-15) {
          z = z_try;
          progressed = true;
          break;
        }
        alpha *= 0.5;
      }
      constraints_(z, c, A);
      cnorm = c.lpNorm<Eigen::Infinity>();
    }

    // Tangential phase: projected objective descent under an l1 merit with
    // fresh least-squares multipliers; the next normal phase restores the
    // second-order constraint drift.
    {
      aat = A * A.transpose();
      aat.diagonal().array() += opts.kkt_regularization;
      const Eigen::LLT<Eigen::MatrixXd> llt2(aat);
      const Eigen::VectorXd grad_now = obj_diag_.cwiseProduct(z);
      const Eigen::VectorXd lam_now = llt2.solve(A * grad_now);
      const Eigen::VectorXd gt = grad_now - A.transpose() * lam_now;
      Eigen::VectorXd dt = -(gt.array() / scale.array()).matrix();
      dt -= A.transpose() * llt2.solve(A * dt);
      const double dt_max = dt.lpNorm<Eigen::Infinity>();
      if (dt_max > 0.5) dt *= 0.5 / dt_max;

      const double rho = 2.0 * lam_now.lpNorm<Eigen::Infinity>() + 1.0;
      const double m0 =
          0.5 * z.dot(obj_diag_.cwiseProduct(z)) + rho * c.lpNorm<1>();
      Eigen::VectorXd c_try(m_);
      Eigen::MatrixXd A_try(m_, n_);
      double alpha = 1.0;
      for (int ls = 0; ls < 25; ++ls) {
        const Eigen::VectorXd z_try = (z + alpha * dt).cwiseMax(lo_).cwiseMin(hi_);
        constraints_(z_try, c_try, A_try);
        const double m_try = 0.5 * z_try.dot(obj_diag_.cwiseProduct(z_try)) +
                             rho * c_try.lpNorm<1>();
        if (m_try < m0 - 1e-15) {
          z = z_try;
          progressed = true;
          break;
        }
        alpha *= 0.5;
      }
    }

    if (!progressed) {
      if (++stalled >= 3) break;
    } else {
      stalled = 0;
    }
  }

  constraints_(z, c, A);
  const double cnorm = c.lpNorm<Eigen::Infinity>();
  if (cnorm <= best.constraint_norm) {
    best.z = z;
    best.constraint_norm = cnorm;
  }
  best.iterations = opts.max_iterations;
  best.converged = false;
  return best;
}

}  // namespace finauv
