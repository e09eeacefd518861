#include <cstdio>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "finauv/ga.hpp"
#include "finauv/io.hpp"

namespace fs = std::filesystem;
using namespace finauv;

namespace {

void print_metrics(const MetricsReport& m) {
  std::printf("RMSE_lin %.4f m   RMSE_ang %.4f rad\n", m.rmse_lin, m.rmse_ang);
  std::printf("MEM_lin  %.4f m   MEM_ang  %.4f rad\n", m.mem_lin, m.mem_ang);
  std::printf("MAW      %.4f N   MW       %.4f N\n", m.maw, m.mw);
  std::printf("MAE_lin  %.4f N   MAE_ang  %.4f Nm\n", m.mae_lin, m.mae_ang);
  std::printf("MCT      %.4f ms  fin rot  %.2f rad\n", m.mct_ms, m.fin_rotation);
}

std::vector<AllocMethod> parse_methods(const std::string& csv) {
  std::vector<AllocMethod> out;
  std::stringstream ss(csv);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(alloc_method_from_string(cell));
  if (out.empty()) throw CLI::ValidationError("--methods", "no methods given");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fin-actuated AUV tracking and control-allocation simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", methods_csv = "inv,opt,prop";
  std::uint64_t seed = 0;
  int runs = 20;
  bool full_scale = false, timing = false;

  auto* sim = app.add_subcommand("simulate", "Run one episode and write its CSV");
  sim->add_option("--config", config_path, "Config file")->required();
  sim->add_option("--seed", seed, "Random seed");
  sim->add_option("--out", out_dir, "Output directory");
  sim->add_flag("--timing", timing,
                "Record measured allocation wall times in the CSV "
                "(off by default so outputs are byte-reproducible)");

  auto* mc = app.add_subcommand("montecarlo", "Run a Monte Carlo campaign");
  mc->add_option("--runs", runs, "Runs per method");
  mc->add_option("--methods", methods_csv, "Comma list of inv,opt,prop");
  mc->add_option("--seed", seed, "Master seed");
  mc->add_option("--out", out_dir, "Output directory");
  mc->add_option("--config", config_path, "Optional base config file");
  mc->add_flag("--full-scale", full_scale, "500 runs of 400 s episodes");

  auto* bench = app.add_subcommand("alloc-bench", "Open-loop allocation benchmark");
  bench->add_option("--methods", methods_csv, "Comma list of inv,opt,prop");
  bench->add_option("--out", out_dir, "Output directory");

  auto* tune = app.add_subcommand("tune", "Genetic gain tuning");
  tune->add_option("--config", config_path, "Config file")->required();
  tune->add_option("--seed", seed, "Random seed");
  int ga_iters = 50, ga_pop = 20;
  double ga_segment = 40.0;
  tune->add_option("--iterations", ga_iters, "GA generations");
  tune->add_option("--population", ga_pop, "GA population size");
  tune->add_option("--segment", ga_segment, "Seconds per reference segment");

  auto* report = app.add_subcommand("report", "Re-aggregate episode CSVs to JSON");
  std::string in_dir;
  report->add_option("--in", in_dir, "Directory of episode CSVs")->required();
  report->add_option("--out", out_dir, "Output directory");
  report->add_option("--config", config_path, "Optional config for geometry");

  CLI11_PARSE(app, argc, argv);

  try {
    fs::create_directories(out_dir);

    if (sim->parsed()) {
      EpisodeConfig cfg = load_config(config_path);
      cfg.seed = seed;
      const EpisodeRecord record = run_episode(cfg);
      const fs::path csv = fs::path(out_dir) / "episode.csv";
      write_episode_csv(record, csv, timing);
      if (record.failed) {
        std::fprintf(stderr, "episode failed: %s (partial series written)\n",
                     record.fail_message.c_str());
        return 2;
      }
      std::printf("wrote %s (%zu rows)\n", csv.string().c_str(), record.rows.size());
      print_metrics(compute_metrics(record, cfg.geometry));
      return 0;
    }

    if (mc->parsed()) {
      CampaignOptions opts;
      if (!config_path.empty()) opts.base = load_config(config_path);
      opts.methods = parse_methods(methods_csv);
      opts.n_runs = full_scale ? 500 : runs;
      opts.episode_duration = full_scale ? 400.0 : 100.0;
      const CampaignSummary summary = run_montecarlo(opts, seed);
      const fs::path json_path = fs::path(out_dir) / "campaign.json";
      write_campaign_json(summary, opts.base, json_path);
      std::printf("wrote %s\n", json_path.string().c_str());
      for (const MethodSummary& m : summary.methods) {
        std::printf("%-5s runs %d  failures %d  RMSE_lin %.3f m  MW %.2f N  MCT %.4f ms\n",
                    alloc_method_name(m.method).c_str(), m.runs, m.failures,
                    m.stats.at("RMSE_lin").median, m.stats.at("MW").median,
                    m.stats.at("MCT").median);
      }
      return 0;
    }

    if (bench->parsed()) {
      BenchOptions opts;
      const auto results = alloc_bench(parse_methods(methods_csv), opts);
      const fs::path json_path = fs::path(out_dir) / "alloc_bench.json";
      write_bench_json(results, json_path);
      std::printf("wrote %s\n", json_path.string().c_str());
      for (const BenchResult& r : results) {
        std::printf("%-5s MAE_lin %.3f N  MAE_ang %.3f Nm  MCT %.4f ms\n",
                    alloc_method_name(r.method).c_str(), r.mae_lin, r.mae_ang,
                    r.mct_ms);
      }
      return 0;
    }

    if (tune->parsed()) {
      EpisodeConfig cfg = load_config(config_path);
      GaParams params;
      params.max_iterations = ga_iters;
      params.population = ga_pop;
      const GaResult res = ga_tune(GaGenomeBounds{}, params, cfg, seed, ga_segment);
      std::printf("best cost %.4f\n", res.best_cost);
      std::printf("K_p = [%.3f, %.3f, %.3f]  k = %.3f\n", res.K_p(0), res.K_p(1),
                  res.K_p(2), res.k);
      std::printf("K_d = [%.3f, %.3f, %.3f, %.3f, %.3f, %.3f]\n", res.K_d(0),
                  res.K_d(1), res.K_d(2), res.K_d(3), res.K_d(4), res.K_d(5));
      std::printf("cost history:");
      for (double c : res.cost_history) std::printf(" %.3f", c);
      std::printf("\n");
      return 0;
    }

    if (report->parsed()) {
      FinGeometry geom;
      if (!config_path.empty()) geom = load_config(config_path).geometry;
      std::vector<double> rmse;
      nlohmann::json j;
      for (const auto& entry : fs::directory_iterator(in_dir)) {
        if (entry.path().extension() != ".csv") continue;
        const EpisodeRecord record = read_episode_csv(entry.path());
        if (record.rows.empty()) continue;
        const MetricsReport m = compute_metrics(record, geom);
        j["episodes"][entry.path().filename().string()] = {
            {"RMSE_lin", m.rmse_lin}, {"RMSE_ang", m.rmse_ang},
            {"MEM_lin", m.mem_lin},   {"MEM_ang", m.mem_ang},
            {"MAW", m.maw},           {"MW", m.mw},
            {"MCT", m.mct_ms},        {"MAE_lin", m.mae_lin},
            {"MAE_ang", m.mae_ang}};
        rmse.push_back(m.rmse_lin);
      }
      j["aggregate"]["RMSE_lin"] = {{"median", median(rmse)}, {"iqr", iqr(rmse)}};
      const fs::path json_path = fs::path(out_dir) / "report.json";
      std::ofstream out(json_path);
      out << j.dump(2) << "\n";
      std::printf("wrote %s (%zu episodes)\n", json_path.string().c_str(),
                  rmse.size());
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
