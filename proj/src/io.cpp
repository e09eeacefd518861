#include "finauv/io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace finauv {

namespace {

const char* kCsvHeader =
    "t,"
    "d_px,d_py,d_pz,d_qw,d_qx,d_qy,d_qz,"
    "t_px,t_py,t_pz,t_qw,t_qx,t_qy,t_qz,"
    "e_px,e_py,e_pz,e_qw,e_qx,e_qy,e_qz,"
    "nu_u,nu_v,nu_w,nu_p,nu_q,nu_r,"
    "taud_x,taud_y,taud_z,taud_phi,taud_theta,taud_psi,"
    "taus_x,taus_y,taus_z,taus_phi,taus_theta,taus_psi,"
    "fin1_A,fin1_phi0,fin1_angle,fin2_A,fin2_phi0,fin2_angle,"
    "fin3_A,fin3_phi0,fin3_angle,fin4_A,fin4_phi0,fin4_angle,"
    "alloc_time_ms,h";

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

void write_episode_csv(const EpisodeRecord& record, const std::filesystem::path& path,
                       bool include_timing) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << kCsvHeader << "\n";
  for (const EpisodeRow& row : record.rows) {
    out << fmt(row.t);
    auto emit = [&](const auto& vec) {
      for (int i = 0; i < vec.size(); ++i) out << ',' << fmt(vec(i));
    };
    emit(row.eta_d);
    emit(row.eta_true);
    emit(row.eta_hat);
    emit(row.nu);
    emit(row.tau_des);
    emit(row.tau_sim);
    for (int i = 0; i < 4; ++i) {
      out << ',' << fmt(row.fin_amp[i]) << ',' << fmt(row.fin_phi0[i]) << ','
          << fmt(row.fin_angle[i]);
    }
    out << ',' << fmt(include_timing ? row.alloc_ms : 0.0) << ',' << row.h << "\n";
  }
  if (!out.good()) throw std::runtime_error("write failed: " + path.string());
}

EpisodeRecord read_episode_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty csv: " + path.string());

  EpisodeRecord record;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> vals;
    vals.reserve(54);
    while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
    if (vals.size() != 54) {
      throw std::runtime_error("malformed csv row in " + path.string());
    }
    EpisodeRow row;
    int c = 0;
    row.t = vals[c++];
    for (int i = 0; i < 7; ++i) row.eta_d(i) = vals[c++];
    for (int i = 0; i < 7; ++i) row.eta_true(i) = vals[c++];
    for (int i = 0; i < 7; ++i) row.eta_hat(i) = vals[c++];
    for (int i = 0; i < 6; ++i) row.nu(i) = vals[c++];
    for (int i = 0; i < 6; ++i) row.tau_des(i) = vals[c++];
    for (int i = 0; i < 6; ++i) row.tau_sim(i) = vals[c++];
    for (int i = 0; i < 4; ++i) {
      row.fin_amp[i] = vals[c++];
      row.fin_phi0[i] = vals[c++];
      row.fin_angle[i] = vals[c++];
    }
    row.alloc_ms = vals[c++];
    row.h = static_cast<int>(vals[c++]);
    record.rows.push_back(row);
  }
  return record;
}

std::string serialize_config(const EpisodeConfig& cfg) {
  std::ostringstream out;
  out << "scenario=" << to_string(cfg.trajectory.scenario)
      << ";shape=" << to_string(cfg.trajectory.shape)
      << ";method=" << alloc_method_name(cfg.allocation.method)
      << ";duration=" << fmt(cfg.duration) << ";seed=" << cfg.seed
      << ";plant_hz=" << fmt(cfg.plant_rate_hz)
      << ";ctrl_div=" << cfg.controller_divisor << ";fix_div=" << cfg.fix_divisor
      << ";noise=" << cfg.noise_enabled;
  const TrajectoryParams& tp = cfg.trajectory;
  out << ";traj=" << fmt(tp.A_x) << ',' << fmt(tp.A_y) << ',' << fmt(tp.A_z) << ','
      << fmt(tp.w_x) << ',' << fmt(tp.w_y) << ',' << fmt(tp.w_z) << ','
      << fmt(tp.l_x) << ',' << fmt(tp.l_y) << ',' << fmt(tp.x0) << ','
      << fmt(tp.y0) << ',' << fmt(tp.z0) << ',' << fmt(tp.c_phi) << ','
      << fmt(tp.t_star) << ',' << fmt(tp.gamma1) << ',' << fmt(tp.gamma2);
  out << ";nd=";
  for (int nd : cfg.allocation.n_d) out << nd;
  out << ";alpha=" << fmt(cfg.allocation.alpha_comp)
      << ";fmax=" << fmt(cfg.allocation.f_th_max);
  out << ";Kp=" << cfg.gains.K_p.transpose() << ";k=" << fmt(cfg.gains.k)
      << ";Kd=" << cfg.gains.K_d.transpose() << ";cpg=" << fmt(cfg.cpg.K_amp) << ','
      << fmt(cfg.cpg.K_zd);
  out << ";theta=" << cfg.theta_true.transpose();
  out << ";geom=" << fmt(cfg.geometry.x_fin) << ',' << fmt(cfg.geometry.y_fin) << ','
      << fmt(cfg.geometry.psi_fin) << ',' << fmt(cfg.geometry.r_c) << ','
      << fmt(cfg.geometry.S_f);
  out << ";coef=" << fmt(cfg.coeffs.rho) << ',' << fmt(cfg.coeffs.C_Lmax) << ','
      << fmt(cfg.coeffs.C_Dmax) << ',' << fmt(cfg.coeffs.C_d) << ','
      << fmt(cfg.coeffs.omega_osc);
  out << ";sens=" << cfg.sensors.sigma_pose.transpose() << ','
      << fmt(cfg.sensors.sigma_rate) << ',' << cfg.sensors.sigma_Q.transpose() << ','
      << cfg.sensors.sigma_R.transpose();
  return out.str();
}

std::string config_digest(const EpisodeConfig& cfg) {
  const std::string s = serialize_config(cfg);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[19];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

using nlohmann::json;

json stats_to_json(const MethodSummary& m) {
  json metrics;
  for (const auto& [name, stat] : m.stats) {
    metrics[name] = {{"median", stat.median}, {"iqr", stat.iqr}};
  }
  return {{"runs", m.runs},
          {"failures", m.failures},
          {"mw_over_12_5_fraction", m.mw_over_limit_fraction},
          {"metrics", metrics}};
}

}  // namespace

void write_campaign_json(const CampaignSummary& summary, const EpisodeConfig& base,
                         const std::filesystem::path& path) {
  json j;
  j["seed"] = summary.seed;
  j["runs"] = summary.runs_requested;
  j["episode_duration_s"] = summary.episode_duration;
  j["config_digest"] = config_digest(base);
  for (const MethodSummary& m : summary.methods) {
    j["methods"][alloc_method_name(m.method)] = stats_to_json(m);
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << j.dump(2) << "\n";
}

void write_bench_json(const std::vector<BenchResult>& results,
                      const std::filesystem::path& path) {
  json j;
  for (const BenchResult& r : results) {
    j["methods"][alloc_method_name(r.method)] = {{"MAE_lin", r.mae_lin},
                                                 {"MAE_ang", r.mae_ang},
                                                 {"MCT_ms", r.mct_ms}};
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << j.dump(2) << "\n";
}

namespace {

using SectionMap = std::map<std::string, std::map<std::string, std::string>>;

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

SectionMap parse_sections(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path.string());
  SectionMap sections;
  std::string line, current;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[' && t.back() == ']') {
      current = trim(t.substr(1, t.size() - 2));
      sections[current];
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos || current.empty()) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": expected 'key = value' inside a [section]");
    }
    sections[current][trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return sections;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(std::stod(trim(cell)));
  return out;
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw std::runtime_error("expected boolean, got '" + s + "'");
}

template <typename V>
void fill_vector(V& target, const std::string& value, const std::string& key) {
  const std::vector<double> vals = parse_list(value);
  if (static_cast<int>(vals.size()) == 1) {
    target.setConstant(vals[0]);
    return;
  }
  if (static_cast<int>(vals.size()) != target.size()) {
    throw std::runtime_error(key + ": expected " + std::to_string(target.size()) +
                             " values, got " + std::to_string(vals.size()));
  }
  for (int i = 0; i < target.size(); ++i) target(i) = vals[i];
}

}  // namespace

EpisodeConfig load_config(const std::filesystem::path& path) {
  const SectionMap sections = parse_sections(path);
  EpisodeConfig cfg;

  // Method defaults apply first so later keys can override them.
  if (auto it = sections.find("episode"); it != sections.end()) {
    if (auto m = it->second.find("method"); m != it->second.end()) {
      cfg.use_method_defaults(alloc_method_from_string(m->second));
    }
  }

  for (const auto& [section, kv] : sections) {
    for (const auto& [key, value] : kv) {
      const std::string where = "[" + section + "] " + key;
      if (section == "episode") {
        if (key == "scenario") cfg.trajectory.scenario = scenario_from_string(value);
        else if (key == "shape") cfg.trajectory.shape = shape_from_string(value);
        else if (key == "method") { /* handled above */ }
        else if (key == "duration") cfg.duration = std::stod(value);
        else if (key == "seed") cfg.seed = std::stoull(value);
        else if (key == "plant_rate_hz") cfg.plant_rate_hz = std::stod(value);
        else if (key == "controller_divisor") cfg.controller_divisor = std::stoi(value);
        else if (key == "fix_divisor") cfg.fix_divisor = std::stoi(value);
        else if (key == "noise") cfg.noise_enabled = parse_bool(value);
        else throw std::runtime_error("unknown config key: " + where);
      } else if (section == "trajectory") {
        TrajectoryParams& t = cfg.trajectory;
        if (key == "A_x") t.A_x = std::stod(value);
        else if (key == "A_y") t.A_y = std::stod(value);
        else if (key == "A_z") t.A_z = std::stod(value);
        else if (key == "w_x") t.w_x = std::stod(value);
        else if (key == "w_y") t.w_y = std::stod(value);
        else if (key == "w_z") t.w_z = std::stod(value);
        else if (key == "l_x") t.l_x = std::stod(value);
        else if (key == "l_y") t.l_y = std::stod(value);
        else if (key == "x0") t.x0 = std::stod(value);
        else if (key == "y0") t.y0 = std::stod(value);
        else if (key == "z0") t.z0 = std::stod(value);
        else if (key == "c_phi") t.c_phi = std::stod(value);
        else if (key == "t_star") t.t_star = std::stod(value);
        else if (key == "gamma1") t.gamma1 = std::stod(value);
        else if (key == "gamma2") t.gamma2 = std::stod(value);
        else throw std::runtime_error("unknown config key: " + where);
      } else if (section == "allocation") {
        if (key == "n_d") {
          const auto vals = parse_list(value);
          if (vals.size() != 6) throw std::runtime_error(where + ": expected 6 values");
          for (int i = 0; i < 6; ++i) cfg.allocation.n_d[i] = static_cast<int>(vals[i]);
        } else if (key == "alpha_comp") cfg.allocation.alpha_comp = std::stod(value);
        else if (key == "f_th_max") cfg.allocation.f_th_max = std::stod(value);
        else throw std::runtime_error("unknown config key: " + where);
      } else if (section == "gains") {
        ControllerGains& g = cfg.gains;
        if (key == "K_p") fill_vector(g.K_p, value, where);
        else if (key == "k") g.k = std::stod(value);
        else if (key == "K_d") fill_vector(g.K_d, value, where);
        else if (key == "Lambda") fill_vector(g.Lambda, value, where);
        else if (key == "Gamma") fill_vector(g.Gamma, value, where);
        else if (key == "hysteresis") g.hysteresis = std::stod(value);
        else if (key == "theta_lower") fill_vector(g.theta_lower, value, where);
        else if (key == "theta_upper") fill_vector(g.theta_upper, value, where);
        else if (key == "theta_layer") fill_vector(g.theta_layer, value, where);
        else throw std::runtime_error("unknown config key: " + where);
      } else if (section == "cpg") {
        if (key == "K_amp") cfg.cpg.K_amp = std::stod(value);
        else if (key == "K_zd") cfg.cpg.K_zd = std::stod(value);
        else throw std::runtime_error("unknown config key: " + where);
      } else if (section == "plant") {
        if (key == "theta") fill_vector(cfg.theta_true, value, where);
        else throw std::runtime_error("unknown config key: " + where);
      } else if (section == "geometry") {
        FinGeometry& ge = cfg.geometry;
        if (key == "x_fin") ge.x_fin = std::stod(value);
        else if (key == "y_fin") ge.y_fin = std::stod(value);
        else if (key == "psi_fin") ge.psi_fin = std::stod(value);
        else if (key == "r_c") ge.r_c = std::stod(value);
        else if (key == "S_f") ge.S_f = std::stod(value);
        else throw std::runtime_error("unknown config key: " + where);
      } else if (section == "coeffs") {
        FinHydroCoeffs& co = cfg.coeffs;
        if (key == "rho") co.rho = std::stod(value);
        else if (key == "C_Lmax") co.C_Lmax = std::stod(value);
        else if (key == "C_Dmax") co.C_Dmax = std::stod(value);
        else if (key == "C_d") co.C_d = std::stod(value);
        else if (key == "omega_osc") co.omega_osc = std::stod(value);
        else throw std::runtime_error("unknown config key: " + where);
      } else if (section == "sensors") {
        SensorConfig& s = cfg.sensors;
        if (key == "sigma_pose") fill_vector(s.sigma_pose, value, where);
        else if (key == "sigma_rate") s.sigma_rate = std::stod(value);
        else if (key == "sigma_Q") fill_vector(s.sigma_Q, value, where);
        else if (key == "sigma_R") fill_vector(s.sigma_R, value, where);
        else if (key == "imu_rate_hz") s.imu_rate_hz = std::stod(value);
        else if (key == "position_rate_hz") s.position_rate_hz = std::stod(value);
        else if (key == "depth_rate_hz") s.depth_rate_hz = std::stod(value);
        else throw std::runtime_error("unknown config key: " + where);
      } else {
        throw std::runtime_error("unknown config section: [" + section + "]");
      }
    }
  }
  return cfg;
}

}  // namespace finauv
