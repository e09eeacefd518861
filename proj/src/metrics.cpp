#include "finauv/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace finauv {

namespace {

UnitQuaternion quat_from_vec7(const Vec7& eta) {
  return UnitQuaternion{eta(3), eta.segment<3>(4)}.normalized();
}

double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double idx = q * (static_cast<double>(sorted.size()) - 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(idx));
  const auto hi = static_cast<std::size_t>(std::ceil(idx));
  const double frac = idx - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  return quantile(values, 0.5);
}

double iqr(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  return quantile(values, 0.75) - quantile(values, 0.25);
}

MetricsReport compute_metrics(const EpisodeRecord& record, const FinGeometry& geom) {
  if (record.rows.empty()) {
    throw std::invalid_argument("compute_metrics: empty record");
  }
  MetricsReport out;

  Vec6 corr;
  corr << 1.0, 1.0, 1.0, geom.y_fin, geom.x_fin, geom.moment_arm();

  double sq_lin = 0.0, sq_ang = 0.0;
  double abs_lin = 0.0, abs_ang = 0.0;
  double wrench_sum = 0.0;
  std::vector<double> alloc_times;
  alloc_times.reserve(record.rows.size());

  for (const EpisodeRow& row : record.rows) {
    const Vec3 p_e = row.eta_d.head<3>() - row.eta_hat.head<3>();
    const Vec3 eul_d = quat_to_euler(quat_from_vec7(row.eta_d));
    const Vec3 eul_hat = quat_to_euler(quat_from_vec7(row.eta_hat));
    Vec3 ang_e;
    for (int i = 0; i < 3; ++i) ang_e(i) = wrap_angle(eul_d(i) - eul_hat(i));

    sq_lin += p_e.squaredNorm();
    sq_ang += ang_e.squaredNorm();
    out.mem_lin = std::max(out.mem_lin, p_e.norm());
    out.mem_ang = std::max(out.mem_ang, ang_e.norm());

    const Vec6 tau_n = row.tau_sim.cwiseQuotient(corr);
    wrench_sum += tau_n.norm();
    out.mw = std::max(out.mw, tau_n.norm());

    abs_lin += (row.tau_des.head<3>() - row.tau_sim.head<3>()).cwiseAbs().sum();
    abs_ang += (row.tau_des.tail<3>() - row.tau_sim.tail<3>()).cwiseAbs().sum();
    alloc_times.push_back(row.alloc_ms);
  }

  const double n = static_cast<double>(record.rows.size());
  out.rmse_lin = std::sqrt(sq_lin / n);
  out.rmse_ang = std::sqrt(sq_ang / n);
  out.maw = wrench_sum / n;
  out.mae_lin = abs_lin / (3.0 * n);
  out.mae_ang = abs_ang / (3.0 * n);
  out.mct_ms = median(std::move(alloc_times));
  out.fin_rotation = 0.25 * (record.fin_rotation[0] + record.fin_rotation[1] +
                             record.fin_rotation[2] + record.fin_rotation[3]);
  return out;
}

}  // namespace finauv
