#include "doctest.h"

#include "earq/scenario_io.hpp"
#include "earq/sim_engine.hpp"
#include "golden_timeline.hpp"
#include "oracles.hpp"

#include <stdexcept>
#include <cmath>
#include <numeric>

using namespace earq;

namespace {

Scenario golden_scenario() { return load_scenario(EARQ_SOURCE_DIR "/scenarios/toy_example.json"); }

Scenario open_scenario() {
  Scenario s;
  s.obstacles.clear();
  s.wall.reset();
  return s;
}

// chi-square 0.999 quantile with 99 degrees of freedom
constexpr double kChi2Crit99 = 148.23035916510173;

}  // namespace

TEST_CASE("best_physical_path examples") {
  Scenario s = open_scenario();
  const Vec2d target(0, 40);
  auto direct = best_physical_path(s, target);
  CHECK(direct.kind == PathKind::Direct);
  CHECK(direct.range_tx_to_target == doctest::Approx(40.0).epsilon(1e-12));
  CHECK(direct.range_target_to_rx == doctest::Approx(40.0).epsilon(1e-12));

  s.obstacles = {Obstacle<double>(Vec2d(-20, 40), 5)};
  s.wall = Wall<double>(Vec2d(-30, 50), Vec2d(10, 50));
  auto bounced = best_physical_path(s, target);
  CHECK(bounced.kind == PathKind::WallReflected);
  const auto brute = oracle::brute_force_bounce(target, s.rx_array.position, s.wall->endpoint_a, s.wall->endpoint_b, 400001);
  CHECK((brute.point - Vec2d(-20, 50)).norm() < 1e-3);
  CHECK(bounced.range_target_to_rx == doctest::Approx(brute.length).epsilon(1e-9));
  CHECK(bounced.range_target_to_rx == doctest::Approx(2 * std::sqrt(500.0)).epsilon(1e-12));
  CHECK(bounced.range_tx_to_target == doctest::Approx(40.0));

  // Second block on the reflected leg.
  s.obstacles.emplace_back(Vec2d(-10, 45), 4);
  CHECK(best_physical_path(s, target).kind == PathKind::None);

  // Blocked Tx leg wins regardless of the Rx side.
  Scenario t = open_scenario();
  t.obstacles = {Obstacle<double>(Vec2d(0, 20), 4)};
  CHECK(best_physical_path(t, target).kind == PathKind::None);

  CHECK_THROWS_AS(best_physical_path(t, Vec2d(0, 0)), std::invalid_argument);
}

TEST_CASE("golden scenario reproduces the expected timeline") {
  const Scenario s = golden_scenario();
  const Trace trace = run_scenario(s);
  const auto fails = golden::check_timeline(trace.records, s.dt_s);
  for (const auto& f : fails) MESSAGE(f);
  CHECK(fails.empty());
  CHECK(trace.termination == TerminationReason::RunEnded);
}

TEST_CASE("nlos flag matches an independent occlusion check") {
  const Scenario s = golden_scenario();
  const Trace trace = run_scenario(s);
  REQUIRE_FALSE(trace.records.empty());
  for (const auto& r : trace.records) {
    CHECK(r.nlos_flag == !oracle::sampled_los_clear(r.target_position, s.rx_array.position, s.obstacles, 20001));
    CHECK((r.target_position - (s.target_start + s.target_velocity * r.time_s)).norm() < 1e-12);
  }
}

TEST_CASE("run_scenario boundaries and determinism") {
  Scenario s = golden_scenario();
  s.duration_s = 0;
  const Trace empty = run_scenario(s);
  CHECK(empty.records.empty());
  CHECK(empty.termination == TerminationReason::RunEnded);

  const Scenario g = golden_scenario();
  const Trace a = run_scenario(g), b = run_scenario(g);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].resi_db == b.records[i].resi_db);
    CHECK(a.records[i].feedback == b.records[i].feedback);
    CHECK(a.records[i].tx_beam_index == b.records[i].tx_beam_index);
    CHECK(a.records[i].rx_beam_index == b.records[i].rx_beam_index);
  }

  Scenario bad = golden_scenario();
  bad.dt_s = 0;
  CHECK_THROWS_AS(run_scenario(bad), std::invalid_argument);
}

TEST_CASE("leaving coverage ends the run") {
  Scenario s = golden_scenario();
  s.duration_s = 60;
  const Trace t = run_scenario(s);
  REQUIRE(t.termination.has_value());
  CHECK(*t.termination != TerminationReason::RunEnded);
  CHECK(t.records.size() < 600);
}

TEST_CASE("step examples") {
  Scenario s = golden_scenario();
  s.obstacles.clear();
  s.wall.reset();
  s.resi_noise_std_db = 0;
  const World world(s);
  RandomStream rng(1);
  std::normal_distribution<double> noise(0.0, 1.0);

  // Point both nodes' best narrow beams at the target: strong echo, ACK, beams held.
  const double t = 5.0;
  const Vec2d target = world.target_at(t);
  const PathInfo path = best_physical_path(s, target);
  double best = -1e9;
  std::size_t bt = 0, br = 0;
  for (std::size_t i = 0; i < world.tx_codebook.narrow_count(); ++i)
    for (std::size_t j = 0; j < world.rx_codebook.narrow_count(); ++j)
      if (double v = world.noise_free_resi(path, i, j, s.power_schedule.at(0)); v > best) best = v, bt = i, br = j;
  REQUIRE(best > s.thresholds.ack_db);

  SensingMemory mem;
  mem = mem.update(4.9, Outcome::Detected, Feedback::Ack, bt, br);
  ProtocolState st;
  st.config.tx_beam_index = bt;
  st.config.rx_beam_index = br;
  const auto held = step(world, st, mem, t, rng, noise);
  CHECK(held.record.feedback == Feedback::Ack);
  CHECK(held.state.config == st.config);
  CHECK(held.record.resi_noise_free_db == doctest::Approx(best));

  // Blocked direct path with no wall: floor RESI, LOST for a tracked target.
  Scenario blocked = s;
  blocked.obstacles = {Obstacle<double>((target + blocked.rx_array.position) / 2, 3)};
  const World bw(blocked);
  const auto lost = step(bw, st, mem, t, rng, noise);
  CHECK(lost.record.path_kind == PathKind::None);
  CHECK(lost.record.nlos_flag);
  CHECK(lost.record.resi_noise_free_db == kResiFloorDb);
  CHECK(lost.record.feedback == Feedback::Lost);

  ProtocolState done;
  done.terminated = true;
  CHECK_THROWS_AS(step(world, done, mem, t, rng, noise), std::logic_error);
}

TEST_CASE("measurement noise is unbiased with the configured spread") {
  Scenario s = golden_scenario();
  s.obstacles.clear();
  s.duration_s = 12;
  s.resi_noise_std_db = 1.5;
  std::vector<double> diff;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    s.rng_seed = seed;
    for (const auto& r : run_scenario(s).records) diff.push_back(r.resi_db - r.resi_noise_free_db);
  }
  REQUIRE(diff.size() > 1000);
  const double mean = std::accumulate(diff.begin(), diff.end(), 0.0) / diff.size();
  double var = 0;
  for (double d : diff) var += (d - mean) * (d - mean);
  const double sd = std::sqrt(var / (diff.size() - 1));
  CHECK(std::abs(mean) < 0.2);
  CHECK(std::abs(sd - 1.5) / 1.5 < 0.2);
}

TEST_CASE("sample_trajectory") {
  const Region region;
  RandomStream a(77), b(77);
  for (int i = 0; i < 10; ++i) {
    const auto ta = sample_trajectory(a, region, 2.25), tb = sample_trajectory(b, region, 2.25);
    CHECK(ta.start == tb.start);
    CHECK(ta.velocity == tb.velocity);
    CHECK(std::abs(ta.velocity.norm() - 2.25) < 1e-12);
  }

  RandomStream rng(2024);
  std::array<int, 100> cells{};
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const auto tr = sample_trajectory(rng, region, 2.25);
    REQUIRE(region.contains(tr.start));
    const int cx = std::min(9, static_cast<int>((tr.start.x() - region.x_min) / (region.x_max - region.x_min) * 10));
    const int cy = std::min(9, static_cast<int>((tr.start.y() - region.y_min) / (region.y_max - region.y_min) * 10));
    ++cells[cy * 10 + cx];
  }
  double chi2 = 0;
  for (int c : cells) chi2 += (c - n / 100.0) * (c - n / 100.0) / (n / 100.0);
  CHECK(chi2 < kChi2Crit99);

  CHECK_THROWS_AS(sample_trajectory(rng, Region{0, 0, 0, 1}, 1.0), std::invalid_argument);
}

TEST_CASE("montecarlo aggregation") {
  const Scenario s = golden_scenario();
  const StatsTable one = run_montecarlo(s, 1, 99);
  MonteCarloTally tally;
  tally.add(run_scenario(montecarlo_run_scenario(s, 99, 0)));
  const StatsTable ref = tally.table();
  CHECK(one.ack_pct == ref.ack_pct);
  CHECK(one.nack_pct == ref.nack_pct);
  CHECK(one.lost_pct == ref.lost_pct);
  CHECK(one.notfound_pct == ref.notfound_pct);
  CHECK(one.nlos_pct == ref.nlos_pct);
  CHECK(one.additional_resources_pct == ref.additional_resources_pct);
  CHECK(one.run_count == 1);

  const StatsTable seq = run_montecarlo(s, 40, 5, 1);
  const StatsTable par = run_montecarlo(s, 40, 5, 3);
  CHECK(seq.ack_pct == par.ack_pct);
  CHECK(seq.nlos_pct == par.nlos_pct);
  CHECK(seq.additional_resources_pct == par.additional_resources_pct);
  CHECK(seq.ack_pct + seq.nack_pct + seq.lost_pct + seq.notfound_pct == doctest::Approx(100.0).epsilon(1e-8));

  // Reverse-order accumulation of the same runs.
  MonteCarloTally fwd, rev;
  for (std::uint64_t i = 0; i < 40; ++i) fwd.add(run_scenario(montecarlo_run_scenario(s, 5, i)));
  for (std::uint64_t i = 40; i-- > 0;) rev.add(run_scenario(montecarlo_run_scenario(s, 5, i)));
  CHECK(fwd.table().ack_pct == seq.ack_pct);
  CHECK(rev.table().ack_pct == seq.ack_pct);
  CHECK(rev.table().lost_pct == seq.lost_pct);

  for (std::uint64_t i = 0; i < 20; ++i) {
    const Scenario run = montecarlo_run_scenario(s, 5, i);
    CHECK(World(run).in_coverage(run.target_start));
    CHECK(std::abs(run.target_velocity.norm() - s.target_speed_m_s) < 1e-12);
  }
  CHECK(derive_run_seed(5, 0) != derive_run_seed(5, 1));
  CHECK(derive_run_seed(5, 0) != derive_run_seed(6, 0));
  CHECK_THROWS_AS(run_montecarlo(s, 0, 1), std::invalid_argument);
}
