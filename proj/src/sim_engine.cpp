#include "earq/sim_engine.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace earq {

namespace {

std::string field_error(const std::string& field, const std::string& what) { return field + ": " + what; }

void validate_array(const ArrayConfig<double>& a, const std::string& name) {
  try {
    a.validate();
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(field_error(name, e.what()));
  }
}

Codebook<double> build_codebook(const ArrayConfig<double>& array, const CodebookSpec& spec) {
  const double h = spec.sector_half_width_rad;
  return make_codebook(array, AngleInterval<double>{-h, h}, spec.n_narrow, spec.wide_element_counts);
}

double relative_angle(const ArrayConfig<double>& array, double world_angle) {
  return std::remainder(world_angle - array.boresight, 2.0 * std::numbers::pi);
}

}  // namespace

void Region::validate() const {
  if (!(x_max > x_min) || !(y_max > y_min)) throw std::invalid_argument("region: degenerate rectangle");
}

void Scenario::validate() const {
  validate_array(tx_array, "tx_array");
  validate_array(rx_array, "rx_array");
  if (tx_array.position == rx_array.position) throw std::invalid_argument("rx_array.position: coincides with tx");
  if (codebook.n_narrow < 1) throw std::invalid_argument("codebook.n_narrow must be >= 1");
  if (!(codebook.sector_half_width_rad > 0) || codebook.sector_half_width_rad >= std::numbers::pi / 2)
    throw std::invalid_argument("codebook.sector_half_width_rad must be in (0, pi/2)");
  for (int m : codebook.wide_element_counts)
    if (m < 1 || m > tx_array.num_elements || m > rx_array.num_elements)
      throw std::invalid_argument("codebook.wide_element_counts: entry out of range");
  if (!target_start.allFinite()) throw std::invalid_argument("target_start must be finite");
  if (!target_velocity.allFinite() || !(target_velocity.norm() > 0))
    throw std::invalid_argument("target_velocity must be finite and non-zero");
  if (!(dt_s > 0)) throw std::invalid_argument("dt_s must be > 0");
  if (!(duration_s >= 0) || !std::isfinite(duration_s)) throw std::invalid_argument("duration_s must be >= 0");
  link.validate();
  if (!(wall_loss_db >= 0)) throw std::invalid_argument("wall_loss_db must be >= 0");
  if (!(resi_noise_std_db >= 0)) throw std::invalid_argument("resi_noise_std_db must be >= 0");
  thresholds.validate();
  power_schedule.validate();
  if (std::abs(power_schedule.levels_w.front() - link.tx_power_w) > 1e-12 * link.tx_power_w)
    throw std::invalid_argument("link.tx_power_w must equal power_schedule.levels_w[0]");
  if (!(lost_timer_s > 0)) throw std::invalid_argument("lost_timer_s must be > 0");
  if (max_retransmissions < 1) throw std::invalid_argument("max_retransmissions must be >= 1");
  if (memory_capacity < 1) throw std::invalid_argument("memory_capacity must be >= 1");
  region.validate();
  if (!(target_speed_m_s > 0)) throw std::invalid_argument("target_speed_m_s must be > 0");
}

std::string_view to_string(PathKind k) {
  switch (k) {
    case PathKind::Direct: return "DIRECT";
    case PathKind::WallReflected: return "WALL_REFLECTED";
    case PathKind::None: return "NONE";
  }
  return "?";
}

World::World(Scenario s) : scenario(std::move(s)) {
  scenario.validate();
  tx_codebook = build_codebook(scenario.tx_array, scenario.codebook);
  rx_codebook = build_codebook(scenario.rx_array, scenario.codebook);
  sweep_space.tx = BeamTiers::for_codebook(tx_codebook.narrow_count(), tx_codebook.size());
  sweep_space.rx = BeamTiers::for_codebook(rx_codebook.narrow_count(), rx_codebook.size());
  noise_power_w = noise_power(scenario.link.bandwidth_hz, scenario.link.noise_figure_db);
}

bool World::in_coverage(const Vec2d& target) const {
  if (!scenario.region.contains(target)) return false;
  auto inside = [&](const ArrayConfig<double>& array, const Codebook<double>& book) {
    if (target == array.position) return false;
    const double rel = relative_angle(array, bearing(array.position, target));
    return rel >= book.sector.min && rel <= book.sector.max;
  };
  return inside(scenario.tx_array, tx_codebook) && inside(scenario.rx_array, rx_codebook);
}

double World::noise_free_resi(const PathInfo& path, std::size_t tx_beam, std::size_t rx_beam, double power_w) const {
  if (path.kind == PathKind::None) return kResiFloorDb;
  const double gt = gain_toward(scenario.tx_array, tx_codebook.beam(tx_beam), path.angle_at_tx);
  const double gr = gain_toward(scenario.rx_array, rx_codebook.beam(rx_beam), path.angle_at_rx);
  LinkParams link = scenario.link;
  link.tx_power_w = power_w;
  double echo = bistatic_echo_power(link, gt, gr, path.range_tx_to_target, path.range_target_to_rx);
  if (path.kind == PathKind::WallReflected) echo /= db_to_linear(scenario.wall_loss_db);
  return resi(echo, noise_power_w);
}

PathInfo best_physical_path(const Scenario& scenario, const Vec2d& target) {
  const Vec2d& tx = scenario.tx_array.position;
  const Vec2d& rx = scenario.rx_array.position;
  if (target == tx || target == rx) throw std::invalid_argument("best_physical_path: target on a node");

  PathInfo info;
  if (!los_clear(tx, target, scenario.obstacles)) return info;
  info.range_tx_to_target = (target - tx).norm();
  info.angle_at_tx = bearing(tx, target);

  if (los_clear(target, rx, scenario.obstacles)) {
    info.kind = PathKind::Direct;
    info.range_target_to_rx = (rx - target).norm();
    info.angle_at_rx = bearing(rx, target);
    return info;
  }
  if (scenario.wall) {
    const double st = signed_distance(*scenario.wall, target);
    const double sr = signed_distance(*scenario.wall, rx);
    // A bounce needs both ends strictly on the same side of the wall line.
    if (st * sr > 0 && std::abs(st) > 1e-12 && std::abs(sr) > 1e-12) {
      if (auto bounce = reflected_path(target, rx, *scenario.wall, scenario.obstacles)) {
        info.kind = PathKind::WallReflected;
        info.range_target_to_rx = bounce->total_length();
        info.angle_at_rx = bounce->arrival_angle;
        return info;
      }
    }
  }
  return PathInfo{};
}

StepResult step(const World& world, const ProtocolState& state, const SensingMemory& memory, double time_s,
                RandomStream& rng, std::normal_distribution<double>& noise) {
  if (state.terminated) throw std::logic_error("step: protocol already terminated");
  const Scenario& sc = world.scenario;

  const Vec2d target = world.target_at(time_s);
  const PathInfo path = best_physical_path(sc, target);
  const bool nlos = !los_clear(target, sc.rx_array.position, sc.obstacles);
  const NodeConfig cfg = state.config;
  const double power = sc.power_schedule.at(cfg.power_level_index);

  const double clean = world.noise_free_resi(path, cfg.tx_beam_index, cfg.rx_beam_index, power);
  const double measured = clean + sc.resi_noise_std_db * noise(rng);

  const Outcome outcome = classify(measured, sc.thresholds);
  const Feedback feedback = decide_feedback(outcome, memory);
  SensingMemory next_memory = memory.update(time_s, outcome, feedback, cfg.tx_beam_index, cfg.rx_beam_index);

  // Sweeps probe the same geometry without fresh noise.
  const BeamProbe probe = [&](std::size_t tx, std::size_t rx) { return world.noise_free_resi(path, tx, rx, power); };
  ProtocolState next = react(feedback, state, world.sweep_space, probe, sc.dt_s, sc.protocol_options());
  if (auto reason = terminated(next, sc.max_retransmissions, true)) {
    next.terminated = true;
    next.termination_reason = reason;
  }

  double snr = kResiFloorDb;
  if (los_clear(sc.tx_array.position, target, sc.obstacles)) {
    LinkParams link = sc.link;
    link.tx_power_w = power;
    const double gt =
        gain_toward(sc.tx_array, world.tx_codebook.beam(cfg.tx_beam_index), bearing(sc.tx_array.position, target));
    snr = ue_snr(link, gt, (target - sc.tx_array.position).norm());
  }

  StepRecord rec{time_s,  target,   path.kind,         nlos,              measured, clean,
                 outcome, feedback, cfg.tx_beam_index, cfg.rx_beam_index, power,    snr};
  return {rec, next, std::move(next_memory)};
}

Trace run_scenario(const Scenario& scenario) {
  const World world(scenario);
  const Scenario& sc = world.scenario;
  Trace trace;
  RandomStream rng(sc.rng_seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  ProtocolState state;
  SensingMemory memory(sc.memory_capacity);

  const auto steps = static_cast<std::size_t>(std::floor(sc.duration_s / sc.dt_s + 1e-9));
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * sc.dt_s;
    if (!world.in_coverage(world.target_at(t))) {
      state.terminated = true;
      state.termination_reason = TerminationReason::OutOfCoverage;
      trace.end_time_s = t;
      break;
    }
    auto result = step(world, state, memory, t, rng, noise);
    trace.records.push_back(result.record);
    state = std::move(result.state);
    memory = std::move(result.memory);
    trace.end_time_s = t + sc.dt_s;
    if (state.terminated) break;
  }
  trace.termination = state.termination_reason.value_or(TerminationReason::RunEnded);
  return trace;
}

Trajectory sample_trajectory(RandomStream& rng, const Region& region, double speed_m_s) {
  region.validate();
  std::uniform_real_distribution<double> ux(region.x_min, region.x_max);
  std::uniform_real_distribution<double> uy(region.y_min, region.y_max);
  std::uniform_real_distribution<double> heading(0.0, 2.0 * std::numbers::pi);
  const double x = ux(rng);
  const double y = uy(rng);
  const double h = heading(rng);
  return {Vec2d(x, y), Vec2d(std::cos(h), std::sin(h)) * speed_m_s};
}

void MonteCarloTally::add(const Trace& trace) {
  ++runs;
  bool increased = false;
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const auto& r = trace.records[i];
    ++iterations;
    switch (r.feedback) {
      case Feedback::Ack: ++ack; break;
      case Feedback::Nack: ++nack; break;
      case Feedback::Lost: ++lost; break;
      case Feedback::NotFound: ++notfound; break;
    }
    if (r.nlos_flag) ++nlos;
    if (i > 0 && r.power_w > trace.records[i - 1].power_w) increased = true;
  }
  if (increased) ++runs_with_power_increase;
}

MonteCarloTally& MonteCarloTally::operator+=(const MonteCarloTally& o) {
  iterations += o.iterations;
  ack += o.ack;
  nack += o.nack;
  lost += o.lost;
  notfound += o.notfound;
  nlos += o.nlos;
  runs += o.runs;
  runs_with_power_increase += o.runs_with_power_increase;
  return *this;
}

StatsTable MonteCarloTally::table() const {
  StatsTable t;
  t.run_count = runs;
  if (iterations > 0) {
    const double n = static_cast<double>(iterations);
    t.ack_pct = 100.0 * static_cast<double>(ack) / n;
    t.nack_pct = 100.0 * static_cast<double>(nack) / n;
    t.lost_pct = 100.0 * static_cast<double>(lost) / n;
    t.notfound_pct = 100.0 * static_cast<double>(notfound) / n;
    t.nlos_pct = 100.0 * static_cast<double>(nlos) / n;
  }
  if (runs > 0) t.additional_resources_pct = 100.0 * static_cast<double>(runs_with_power_increase) / runs;
  return t;
}

}  // namespace earq
