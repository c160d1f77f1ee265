#include "earq/sim_engine.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>
#include <vector>

namespace earq {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr int kMaxStartAttempts = 10000;

}  // namespace

std::uint64_t derive_run_seed(std::uint64_t master_seed, std::uint64_t run_index) {
  return splitmix64(splitmix64(master_seed) ^ splitmix64(run_index + 0x632BE59BD9B4E019ULL));
}

Scenario montecarlo_run_scenario(const Scenario& scenario_template, std::uint64_t master_seed,
                                 std::uint64_t run_index) {
  const std::uint64_t seed = derive_run_seed(master_seed, run_index);
  Scenario sc = scenario_template;
  const World probe_world(scenario_template);
  RandomStream rng(seed);
  // Starts outside either node's sector would end the run before the first
  // sample, so they are redrawn from the same stream.
  for (int attempt = 0;; ++attempt) {
    if (attempt == kMaxStartAttempts)
      throw std::runtime_error("montecarlo: no trajectory start inside coverage");
    const Trajectory traj = sample_trajectory(rng, sc.region, sc.target_speed_m_s);
    if (probe_world.in_coverage(traj.start) && traj.start != sc.tx_array.position &&
        traj.start != sc.rx_array.position) {
      sc.target_start = traj.start;
      sc.target_velocity = traj.velocity;
      break;
    }
  }
  sc.rng_seed = splitmix64(seed ^ 0xD1B54A32D192ED03ULL);
  return sc;
}

StatsTable run_montecarlo(const Scenario& scenario_template, std::size_t n_runs, std::uint64_t master_seed,
                          unsigned threads) {
  if (n_runs < 1) throw std::invalid_argument("montecarlo: n_runs must be >= 1");
  scenario_template.validate();
  threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(n_runs));

  std::vector<MonteCarloTally> per_run(n_runs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n_runs; i = next++) {
      const Scenario sc = montecarlo_run_scenario(scenario_template, master_seed, i);
      per_run[i].add(run_scenario(sc));
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  MonteCarloTally total;
  for (const auto& t : per_run) total += t;
  return total.table();
}

}  // namespace earq
