#pragma once

// Time-stepped bistatic sensing loop and the Monte Carlo harness built on it.

#include "earq/scenario.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

namespace earq {

enum class PathKind { Direct, WallReflected, None };

std::string_view to_string(PathKind k);

struct PathInfo {
  PathKind kind = PathKind::None;
  double range_tx_to_target = 0.0;
  double range_target_to_rx = 0.0;  // full bounce length when wall-reflected
  double angle_at_tx = 0.0;
  double angle_at_rx = 0.0;
};

/// Scenario plus the derived codebooks and constants shared by every step.
struct World {
  Scenario scenario;
  Codebook<double> tx_codebook;
  Codebook<double> rx_codebook;
  SweepSpace sweep_space;
  double noise_power_w = 0.0;

  explicit World(Scenario s);

  Vec2d target_at(double time_s) const { return scenario.target_start + scenario.target_velocity * time_s; }
  bool in_coverage(const Vec2d& target) const;
  /// Noise-free RESI for a beam pair at a given path and transmit power.
  double noise_free_resi(const PathInfo& path, std::size_t tx_beam, std::size_t rx_beam, double power_w) const;
};

struct StepRecord {
  double time_s;
  Vec2d target_position;
  PathKind path_kind;
  bool nlos_flag;
  double resi_db;
  double resi_noise_free_db;
  Outcome outcome;
  Feedback feedback;
  std::size_t tx_beam_index;
  std::size_t rx_beam_index;
  double power_w;
  double ue_snr_db;
};

struct Trace {
  std::vector<StepRecord> records;
  std::optional<TerminationReason> termination;
  double end_time_s = 0.0;
};

using RandomStream = std::mt19937_64;

struct StepResult {
  StepRecord record;
  ProtocolState state;
  SensingMemory memory;
};

/// Tx leg must be clear; Rx side prefers the direct path, then the wall bounce.
PathInfo best_physical_path(const Scenario& scenario, const Vec2d& target);

/// Draws exactly one standard normal from `noise` per call.
StepResult step(const World& world, const ProtocolState& state, const SensingMemory& memory, double time_s,
                RandomStream& rng, std::normal_distribution<double>& noise);

Trace run_scenario(const Scenario& scenario);

struct Trajectory {
  Vec2d start;
  Vec2d velocity;
};

Trajectory sample_trajectory(RandomStream& rng, const Region& region, double speed_m_s);

struct StatsTable {
  double ack_pct = 0.0;
  double nack_pct = 0.0;
  double lost_pct = 0.0;
  double notfound_pct = 0.0;
  double nlos_pct = 0.0;
  double additional_resources_pct = 0.0;
  std::size_t run_count = 0;
};

/// Integer tallies; merging is associative and commutative.
struct MonteCarloTally {
  std::uint64_t iterations = 0;
  std::uint64_t ack = 0, nack = 0, lost = 0, notfound = 0;
  std::uint64_t nlos = 0;
  std::uint64_t runs = 0;
  std::uint64_t runs_with_power_increase = 0;

  void add(const Trace& trace);
  MonteCarloTally& operator+=(const MonteCarloTally& other);
  StatsTable table() const;
};

/// Per-run seed, a pure function of (master_seed, run_index).
std::uint64_t derive_run_seed(std::uint64_t master_seed, std::uint64_t run_index);

/// Builds run `run_index` of a batch: random trajectory inside coverage and its
/// own measurement seed.
Scenario montecarlo_run_scenario(const Scenario& scenario_template, std::uint64_t master_seed,
                                 std::uint64_t run_index);

StatsTable run_montecarlo(const Scenario& scenario_template, std::size_t n_runs, std::uint64_t master_seed,
                          unsigned threads = 1);

}  // namespace earq
