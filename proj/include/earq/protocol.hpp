#pragma once

// e-ARQ closed loop: each feedback maps to a Tx/Rx reconfiguration.
//   ACK       hold the current beams
//   NACK      narrow-beam sweep
//   LOST      narrow + wide sweep, power steps up after a sustained loss
//   NOT_FOUND wide-beam sweep

#include "earq/detector.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

namespace earq {

struct NodeConfig {
  std::size_t tx_beam_index = 0;
  std::size_t rx_beam_index = 0;
  std::size_t power_level_index = 0;
  bool wide_mode = false;

  bool operator==(const NodeConfig&) const = default;
};

enum class TerminationReason { MaxRetransmissions, OutOfCoverage, RunEnded };

std::string_view to_string(TerminationReason r);

struct ProtocolState {
  NodeConfig config;
  double lost_elapsed_s = 0.0;
  std::size_t retransmission_count = 0;
  bool terminated = false;
  std::optional<TerminationReason> termination_reason;
};

struct PowerSchedule {
  std::vector<double> levels_w{1e-4, 3e-4};

  void validate() const;
  double at(std::size_t level) const { return levels_w.at(level); }
};

/// Candidate beam indices per tier. Indices address a node's combined
/// codebook (narrow tier first).
struct BeamTiers {
  std::vector<std::size_t> narrow;
  std::vector<std::size_t> wide;

  static BeamTiers for_codebook(std::size_t narrow_count, std::size_t total);
  std::vector<std::size_t> all() const;
};

struct SweepSpace {
  BeamTiers tx;
  BeamTiers rx;
};

struct ProtocolOptions {
  PowerSchedule power_schedule;
  double lost_timer_s = 0.5;
  std::size_t max_retransmissions = 50;
  bool reduce_power_on_ack = false;
};

/// Noise-free RESI (dB) for a (tx, rx) beam pair at the current geometry.
using BeamProbe = std::function<double(std::size_t tx_beam, std::size_t rx_beam)>;

struct SweepResult {
  std::size_t tx;
  std::size_t rx;
  double resi_db;
};

/// Exhaustive argmax over tx x rx; ties go to the lowest (tx, rx).
SweepResult beam_sweep(const BeamProbe& probe, const std::vector<std::size_t>& tx_candidates,
                       const std::vector<std::size_t>& rx_candidates);

ProtocolState react(Feedback feedback, const ProtocolState& state, const SweepSpace& space,
                    const BeamProbe& probe, double dt_s, const ProtocolOptions& options);

/// MaxRetransmissions wins when both conditions hold.
std::optional<TerminationReason> terminated(const ProtocolState& state, std::size_t max_retransmissions,
                                            bool target_in_coverage);

}  // namespace earq
