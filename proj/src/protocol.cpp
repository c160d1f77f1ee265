#include "earq/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace earq {

namespace {

// Accumulated 0.1 s steps drift in the last bits.
constexpr double kTimerSlack = 1e-9;

}  // namespace

std::string_view to_string(TerminationReason r) {
  switch (r) {
    case TerminationReason::MaxRetransmissions: return "MAX_RETRANSMISSIONS";
    case TerminationReason::OutOfCoverage: return "OUT_OF_COVERAGE";
    case TerminationReason::RunEnded: return "RUN_ENDED";
  }
  return "?";
}

void PowerSchedule::validate() const {
  if (levels_w.empty()) throw std::invalid_argument("power_schedule.levels_w must not be empty");
  for (std::size_t i = 0; i < levels_w.size(); ++i) {
    if (!(levels_w[i] > 0)) throw std::invalid_argument("power_schedule.levels_w must be positive");
    if (i > 0 && !(levels_w[i] > levels_w[i - 1]))
      throw std::invalid_argument("power_schedule.levels_w must be strictly increasing");
  }
}

BeamTiers BeamTiers::for_codebook(std::size_t narrow_count, std::size_t total) {
  BeamTiers t;
  for (std::size_t i = 0; i < total; ++i) (i < narrow_count ? t.narrow : t.wide).push_back(i);
  return t;
}

std::vector<std::size_t> BeamTiers::all() const {
  std::vector<std::size_t> out = narrow;
  out.insert(out.end(), wide.begin(), wide.end());
  std::sort(out.begin(), out.end());
  return out;
}

SweepResult beam_sweep(const BeamProbe& probe, const std::vector<std::size_t>& tx_candidates,
                       const std::vector<std::size_t>& rx_candidates) {
  if (tx_candidates.empty() || rx_candidates.empty())
    throw std::invalid_argument("beam_sweep: empty candidate list");
  std::optional<SweepResult> best;
  for (std::size_t tx : tx_candidates) {
    for (std::size_t rx : rx_candidates) {
      const double v = probe(tx, rx);
      const bool better = !best || v > best->resi_db ||
                          (v == best->resi_db && std::pair(tx, rx) < std::pair(best->tx, best->rx));
      if (better) best = SweepResult{tx, rx, v};
    }
  }
  return *best;
}

ProtocolState react(Feedback feedback, const ProtocolState& state, const SweepSpace& space,
                    const BeamProbe& probe, double dt_s, const ProtocolOptions& options) {
  if (state.terminated) throw std::logic_error("react: protocol already terminated");
  if (!(dt_s > 0)) throw std::invalid_argument("react: dt must be > 0");

  ProtocolState next = state;
  auto adopt = [&](const SweepResult& s, bool wide_flag) {
    next.config.tx_beam_index = s.tx;
    next.config.rx_beam_index = s.rx;
    next.config.wide_mode = wide_flag;
  };

  if (feedback != Feedback::Lost) next.lost_elapsed_s = 0.0;

  switch (feedback) {
    case Feedback::Ack:
      next.config.wide_mode = false;
      next.retransmission_count = 0;
      if (options.reduce_power_on_ack && next.config.power_level_index > 0) --next.config.power_level_index;
      break;

    case Feedback::Nack: {
      const auto best = beam_sweep(probe, space.tx.narrow, space.rx.narrow);
      adopt(best, false);
      ++next.retransmission_count;
      break;
    }

    case Feedback::Lost: {
      next.lost_elapsed_s += dt_s;
      const std::size_t levels = options.power_schedule.levels_w.size();
      if (next.lost_elapsed_s >= options.lost_timer_s - kTimerSlack &&
          next.config.power_level_index + 1 < levels) {
        ++next.config.power_level_index;
        next.lost_elapsed_s = 0.0;
      }
      const auto tx = space.tx.all();
      const auto rx = space.rx.all();
      const auto best = beam_sweep(probe, tx, rx);
      const bool wide = std::find(space.tx.wide.begin(), space.tx.wide.end(), best.tx) != space.tx.wide.end() ||
                        std::find(space.rx.wide.begin(), space.rx.wide.end(), best.rx) != space.rx.wide.end();
      adopt(best, wide);
      ++next.retransmission_count;
      break;
    }

    case Feedback::NotFound: {
      // Degenerate codebooks with no wide tier fall back to the narrow one.
      const auto& tx = space.tx.wide.empty() ? space.tx.narrow : space.tx.wide;
      const auto& rx = space.rx.wide.empty() ? space.rx.narrow : space.rx.wide;
      adopt(beam_sweep(probe, tx, rx), true);
      ++next.retransmission_count;
      break;
    }
  }
  return next;
}

std::optional<TerminationReason> terminated(const ProtocolState& state, std::size_t max_retransmissions,
                                            bool target_in_coverage) {
  if (state.retransmission_count >= max_retransmissions) return TerminationReason::MaxRetransmissions;
  if (!target_in_coverage) return TerminationReason::OutOfCoverage;
  return std::nullopt;
}

}  // namespace earq
