#pragma once

#include "earq/detector.hpp"
#include "earq/geometry2d.hpp"
#include "earq/link_budget.hpp"
#include "earq/phased_array.hpp"
#include "earq/protocol.hpp"

#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

namespace earq {

struct CodebookSpec {
  std::size_t n_narrow = 18;
  std::vector<int> wide_element_counts{4};
  double sector_half_width_rad = std::numbers::pi / 3;
};

struct Region {
  double x_min = -35.0;
  double x_max = 25.0;
  double y_min = 10.0;
  double y_max = 60.0;

  bool contains(const Vec2d& p) const {
    return p.x() >= x_min && p.x() <= x_max && p.y() >= y_min && p.y() <= y_max;
  }
  void validate() const;
};

struct Scenario {
  // Boresights point at the centre of the default region, (-5, 35).
  ArrayConfig<double> tx_array{16, 0.5, 24e9, 1.7126933813990606, Vec2d(0.0, 0.0)};
  ArrayConfig<double> rx_array{16, 0.5, 24e9, -0.14189705460416394, Vec2d(-40.0, 40.0)};
  CodebookSpec codebook;
  std::vector<Obstacle<double>> obstacles;
  std::optional<Wall<double>> wall;
  Vec2d target_start{10.0, 25.0};
  Vec2d target_velocity{-1.7083273553219174, 1.464280590275929};
  double duration_s = 20.0;
  double dt_s = 0.1;
  LinkParams link;
  double wall_loss_db = 3.0;
  double resi_noise_std_db = 1.0;
  Thresholds thresholds;
  PowerSchedule power_schedule;
  double lost_timer_s = 0.5;
  std::size_t max_retransmissions = 50;
  bool reduce_power_on_ack = false;
  std::size_t memory_capacity = SensingMemory::kDefaultCapacity;
  // Monte Carlo trajectory region; also the coverage area.
  Region region;
  double target_speed_m_s = 2.25;
  std::uint64_t rng_seed = 7;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  ProtocolOptions protocol_options() const {
    return {power_schedule, lost_timer_s, max_retransmissions, reduce_power_on_ack};
  }
};

}  // namespace earq
