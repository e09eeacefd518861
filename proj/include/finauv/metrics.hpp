#pragma once

#include "finauv/episode.hpp"

namespace finauv {

/// Tracking, effort, latency and allocation-accuracy summary of one episode.
struct MetricsReport {
  double rmse_lin{0.0};      // [m]
  double rmse_ang{0.0};      // [rad]
  double mem_lin{0.0};       // [m]
  double mem_ang{0.0};       // [rad]
  double maw{0.0};           // [N]
  double mw{0.0};            // [N]
  double mct_ms{0.0};        // [ms]
  double mae_lin{0.0};       // [N]
  double mae_ang{0.0};       // [N m]
  double fin_rotation{0.0};  // [rad], mean accumulated zero-direction travel
};

/// Errors compare desired against estimated pose (Euler-form orientation,
/// componentwise wrapped). Torques in MAW/MW are normalized to forces by the
/// moment arms [1, 1, 1, y_fin, x_fin, M_a]; MAE is unnormalized.
/// Throws std::invalid_argument on an empty record.
MetricsReport compute_metrics(const EpisodeRecord& record, const FinGeometry& geom);

double median(std::vector<double> values);

/// Interquartile range (linear-interpolated quartiles).
double iqr(std::vector<double> values);

}  // namespace finauv
