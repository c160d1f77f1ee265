#include "earq/cli.hpp"

#include "earq/report.hpp"
#include "earq/scenario_io.hpp"
#include "earq/sim_engine.hpp"

#include <ostream>
#include <stdexcept>

#include "CLI11.hpp"

namespace earq::cli {

namespace {

std::vector<Thresholds> default_grid() {
  std::vector<Thresholds> grid;
  for (double ack : {6.0, 8.0, 10.0, 12.0})
    for (double nack : {0.0, 2.0, 4.0})
      if (ack > nack) grid.push_back({ack, nack});
  return grid;
}

Scenario prepare(const RunOptions& o) {
  Scenario sc = load_scenario(o.scenario_path);
  if (o.obstacle_side_override) {
    if (sc.obstacles.empty()) throw ConfigError("--obstacle-side: scenario has no obstacles");
    for (auto& ob : sc.obstacles) ob = Obstacle<double>(ob.center, *o.obstacle_side_override);
  }
  if (o.ack_db) sc.thresholds.ack_db = *o.ack_db;
  if (o.nack_db) sc.thresholds.nack_db = *o.nack_db;
  try {
    sc.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return sc;
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw std::runtime_error(dir.string() + ": cannot create output directory");
}

}  // namespace

int execute(const RunOptions& o, std::ostream& out, std::ostream& err) {
  try {
    if (o.scenario_path.empty()) throw ConfigError("--scenario: path is required");
    if (o.output_dir.empty()) throw ConfigError("--out: path is required");
    Scenario sc = prepare(o);
    ensure_dir(o.output_dir);

    switch (o.command) {
      case Command::Run: {
        if (o.master_seed) sc.rng_seed = *o.master_seed;
        const Trace trace = run_scenario(sc);
        write_file_atomic(o.output_dir / "trace.csv", trace_csv(trace));
        write_file_atomic(o.output_dir / "events.json", trace_events(trace).dump(2) + "\n");
        out << "wrote " << trace.records.size() << " steps to " << (o.output_dir / "trace.csv").string() << "\n";
        return 0;
      }
      case Command::MonteCarlo: {
        if (o.n_runs < 1) throw ConfigError("--runs: must be >= 1");
        const StatsTable stats = run_montecarlo(sc, o.n_runs, o.master_seed.value_or(sc.rng_seed), o.threads);
        write_file_atomic(o.output_dir / "stats.json", stats_json(stats).dump(2) + "\n");
        write_file_atomic(o.output_dir / "stats.csv", stats_csv({stats}));
        out << stats_json(stats).dump() << "\n";
        return 0;
      }
      case Command::SweepThresholds: {
        if (o.n_runs < 1) throw ConfigError("--runs: must be >= 1");
        std::vector<Thresholds> grid;
        if (o.threshold_grid)
          grid = *o.threshold_grid;
        else if (o.thresholds_grid_path)
          grid = load_thresholds_grid(*o.thresholds_grid_path);
        else
          grid = default_grid();
        std::vector<ThresholdSweepRow> rows;
        for (const auto& t : grid) {
          Scenario s = sc;
          s.thresholds = t;
          rows.push_back({t, run_montecarlo(s, o.n_runs, o.master_seed.value_or(sc.rng_seed), o.threads)});
        }
        write_file_atomic(o.output_dir / "sweep.json", sweep_json(rows).dump(2) + "\n");
        write_file_atomic(o.output_dir / "sweep.csv", sweep_csv(rows));
        out << "wrote " << rows.size() << " threshold rows to " << (o.output_dir / "sweep.csv").string() << "\n";
        return 0;
      }
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bistatic ISAC sensing simulator with e-ARQ feedback"};
  app.require_subcommand(1);

  RunOptions o;
  std::string scenario, out_dir = ".", grid;
  std::uint64_t seed = 0;
  double obstacle_side = 0, ack = 0, nack = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--scenario", scenario, "Scenario JSON file")->required();
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--seed", seed, "RNG seed (run) or master seed (montecarlo)");
    sub->add_option("--obstacle-side", obstacle_side, "Override every obstacle's side [m]");
    sub->add_option("--ack-db", ack, "ACK (pass) threshold [dB]");
    sub->add_option("--nack-db", nack, "NACK (fail) threshold [dB]");
  };
  auto* run = app.add_subcommand("run", "Simulate one trajectory; writes trace.csv and events.json");
  add_common(run);
  auto* mc = app.add_subcommand("montecarlo", "Random straight trajectories; writes stats.json and stats.csv");
  add_common(mc);
  auto* sweep = app.add_subcommand("sweep-thresholds", "Monte Carlo statistics per threshold pair");
  add_common(sweep);
  for (auto* sub : {mc, sweep}) {
    sub->add_option("--runs", o.n_runs, "Number of trajectories")->check(CLI::PositiveNumber);
    sub->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
  }
  sweep->add_option("--thresholds-grid", grid, "JSON list of {ack_db, nack_db} pairs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  CLI::App* used = run->parsed() ? run : mc->parsed() ? mc : sweep;
  o.command = used == run ? Command::Run : used == mc ? Command::MonteCarlo : Command::SweepThresholds;
  o.scenario_path = scenario;
  o.output_dir = out_dir;
  if (used->count("--seed")) o.master_seed = seed;
  if (used->count("--obstacle-side")) o.obstacle_side_override = obstacle_side;
  if (used->count("--ack-db")) o.ack_db = ack;
  if (used->count("--nack-db")) o.nack_db = nack;
  if (used == sweep && sweep->count("--thresholds-grid")) o.thresholds_grid_path = grid;
  return execute(o, out, err);
}

}  // namespace earq::cli
