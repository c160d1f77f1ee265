#pragma once

#include "earq/detector.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

namespace earq::cli {

enum class Command { Run, MonteCarlo, SweepThresholds };

struct RunOptions {
  Command command = Command::Run;
  std::filesystem::path scenario_path;
  std::filesystem::path output_dir = ".";
  std::size_t n_runs = 300;
  std::optional<std::uint64_t> master_seed;  // defaults to the scenario's rng_seed
  std::optional<double> obstacle_side_override;
  std::optional<double> ack_db;
  std::optional<double> nack_db;
  std::optional<std::filesystem::path> thresholds_grid_path;
  std::optional<std::vector<Thresholds>> threshold_grid;  // takes precedence over the path
  unsigned threads = 1;
};

/// Runs one command. Returns 0 on success; diagnostics go to `err`.
int execute(const RunOptions& options, std::ostream& out, std::ostream& err);

/// Parses argv (subcommand + flags) and executes it.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace earq::cli
