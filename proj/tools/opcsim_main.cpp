// Command-line front end: single runs, comparison sweeps, and report
// extraction from previously written output directories.
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "opcsim/config.hpp"
#include "opcsim/simulator.hpp"
#include "opcsim/stats.hpp"
#include "opcsim/sweep.hpp"

namespace fs = std::filesystem;
using namespace opcsim;

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string chunk_log_csv(const MetricsReport& report) {
  std::string out = "receiver,object_index,rank,responder_hops,issued_ms,delivered_ms\n";
  char buf[96];
  for (const ChunkLogEntry& e : report.chunk_log) {
    std::snprintf(buf, sizeof buf, "%u,%u,%u,%u,%.17g,%.17g\n", e.receiver, e.object_index, e.rank,
                  e.responder_hops, e.issued_ms, e.delivered_ms);
    out += buf;
  }
  return out;
}

void write_run_outputs(const fs::path& dir, const RunSetup& setup, const MetricsReport& report) {
  fs::create_directories(dir);
  write_file(dir / "resolved_config.txt", setup.echo);
  write_file(dir / "metrics.txt", report.to_text());
  write_file(dir / "routers.csv", report.routers_csv());
  save_catalog_file(setup.config.catalog, (dir / "catalog.csv").string());
  if (!report.snapshots.empty()) write_file(dir / "snapshots.csv", report.snapshots_csv());
  if (!report.chunk_log.empty()) write_file(dir / "chunk_log.csv", chunk_log_csv(report));
}

int cmd_run(const std::string& config_path, const std::string& out_dir) {
  RunSetup setup;
  try {
    const IniFile ini = parse_ini_file(config_path);
    const std::string base_dir = fs::path(config_path).parent_path().string();
    setup = build_sim_config(ini, base_dir);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  MetricsReport report = run_simulation(setup.config);
  report.labels = setup.labels;
  if (!out_dir.empty()) {
    write_run_outputs(out_dir, setup, report);
    std::cerr << "wrote " << out_dir << "\n";
  }
  std::cout << report.to_text();
  return 0;
}

int cmd_sweep(const std::string& spec_path, const std::string& out_dir, int parallel) {
  SweepSpec spec;
  try {
    spec = build_sweep_spec(parse_ini_file(spec_path));
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  const fs::path out(out_dir);
  fs::create_directories(out / "runs");
  write_file(out / "resolved_spec.txt", sweep_echo(spec));

  std::size_t done = 0;
  const SweepResult result =
      run_sweep(spec, parallel, [&](const RunKey& key, const MetricsReport& report) {
        const fs::path run_dir = out / "runs" / run_id(key);
        fs::create_directories(run_dir);
        write_file(run_dir / "metrics.txt", report.to_text());
        write_file(run_dir / "routers.csv", report.routers_csv());
        if (!report.snapshots.empty()) write_file(run_dir / "snapshots.csv", report.snapshots_csv());
        ++done;
        std::cerr << "[" << done << "] " << run_id(key) << "\n";
      });

  write_file(out / "sweep_rows.csv", result.rows_csv());
  write_file(out / "sweep_gains.csv", result.gains_csv());
  std::cout << "runs: " << result.rows.size() << "\n";
  std::cout << "rows: " << (out / "sweep_rows.csv").string() << "\n";
  std::cout << "gains: " << (out / "sweep_gains.csv").string() << "\n";
  return 0;
}

int cmd_report(const std::string& in_dir, bool csv, bool cdf) {
  const fs::path in(in_dir);
  try {
    if (fs::exists(in / "sweep_rows.csv")) {
      if (csv) {
        std::cout << read_file(in / "sweep_gains.csv");
      } else {
        std::cout << read_file(in / "resolved_spec.txt") << "\n";
        std::cout << read_file(in / "sweep_gains.csv");
      }
      return 0;
    }
    if (!fs::exists(in / "metrics.txt"))
      throw ConfigError(in.string() + " holds neither a run (metrics.txt) nor a sweep (sweep_rows.csv)");

    if (csv) {
      std::cout << read_file(in / "routers.csv");
    } else {
      std::cout << read_file(in / "metrics.txt");
    }
    if (cdf) {
      if (!fs::exists(in / "snapshots.csv"))
        throw ConfigError("no snapshots.csv in " + in.string() +
                          " (enable sim.snapshot_every_events or sim.snapshot_every_ms)");
      std::ifstream snaps((in / "snapshots.csv").string());
      const std::vector<CacheStateLog> logs = parse_snapshots_csv(snaps);
      Catalog catalog;
      const Catalog* catalog_ptr = nullptr;
      if (fs::exists(in / "catalog.csv")) {
        catalog = load_catalog_file((in / "catalog.csv").string());
        catalog_ptr = &catalog;
      }
      const BehavioralStats stats = behavioral_stats(logs, catalog_ptr);
      write_file(in / "hit_rank_cdf.csv", cdf_csv(stats.hit_rank_cdf));
      write_file(in / "stored_rank_cdf.csv", cdf_csv(stats.stored_rank_cdf));
      write_file(in / "objects.csv", objects_csv(stats));
      std::cout << "state logs: " << stats.log_count << "\n";
      std::cout << "wrote " << (in / "hit_rank_cdf.csv").string() << "\n";
      std::cout << "wrote " << (in / "stored_rank_cdf.csv").string() << "\n";
      std::cout << "wrote " << (in / "objects.csv").string() << "\n";
    }
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "report error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-level object cache network simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  CLI::App* run = app.add_subcommand("run", "simulate one configuration");
  run->add_option("--config", config_path, "INI config file")->required();
  run->add_option("--out", out_dir, "directory for metrics/state outputs");

  std::string spec_path, sweep_out;
  int parallel = 0;
  CLI::App* sweep = app.add_subcommand("sweep", "run a scheme-comparison sweep");
  sweep->add_option("--spec", spec_path, "INI sweep spec")->required();
  sweep->add_option("--out", sweep_out, "output directory")->required();
  sweep->add_option("--parallel", parallel, "worker threads (0 = all)");

  std::string in_dir;
  bool csv = false, cdf = false;
  CLI::App* report = app.add_subcommand("report", "summarize a run or sweep directory");
  report->add_option("--in", in_dir, "directory written by run/sweep --out")->required();
  report->add_flag("--csv", csv, "emit the per-router (run) or gains (sweep) CSV");
  report->add_flag("--cdf", cdf, "derive rank CDFs from the state log");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir);
    if (sweep->parsed()) return cmd_sweep(spec_path, sweep_out, parallel);
    return cmd_report(in_dir, csv, cdf);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
