#pragma once

// Event-order checks for the toy example trace. Returns an empty list when
// every expected phase is present in order, otherwise one message per miss.

#include "earq/sim_engine.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace golden {

using earq::Feedback;
using earq::PathKind;
using earq::StepRecord;

inline std::vector<std::string> check_timeline(const std::vector<StepRecord>& r, double dt) {
  std::vector<std::string> fails;
  if (r.empty()) return {"empty trace"};
  auto sample_of = [&](double t) { return static_cast<long>(std::lround(t / dt)); };

  if (r.front().feedback != Feedback::NotFound || std::abs(r.front().time_s) > 1e-12)
    fails.push_back("first sample is not NOT_FOUND at t=0");

  std::size_t first_ack = r.size();
  for (std::size_t i = 0; i < r.size(); ++i)
    if (r[i].feedback == Feedback::Ack) {
      first_ack = i;
      break;
    }
  if (first_ack == r.size() || r[first_ack].time_s > 0.5 + 1e-9) fails.push_back("no ACK within 0.5 s");

  // ACK holds the beams, so a contiguous ACK run involves no sweep.
  const long min_run = sample_of(1.0);
  std::size_t run_end = r.size();
  for (std::size_t i = first_ack, len = 0; i < r.size(); ++i) {
    len = r[i].feedback == Feedback::Ack ? len + 1 : 0;
    if (static_cast<long>(len) >= min_run) {
      run_end = i;
      break;
    }
  }
  if (run_end == r.size()) fails.push_back("no contiguous ACK run of at least 1.0 s");

  std::size_t nack_recovery = r.size();
  for (std::size_t i = run_end == r.size() ? 0 : run_end; i + 1 < r.size(); ++i)
    if (r[i].feedback == Feedback::Nack && r[i + 1].feedback == Feedback::Ack) {
      nack_recovery = i + 1;
      break;
    }
  if (nack_recovery == r.size()) fails.push_back("no NACK sweep followed by ACK within one sample");

  std::size_t nlos_onset = r.size();
  for (std::size_t i = 0; i < r.size(); ++i)
    if (r[i].nlos_flag) {
      nlos_onset = i;
      break;
    }
  if (nlos_onset == r.size()) {
    fails.push_back("target never leaves line of sight");
    return fails;
  }
  if (nlos_onset < nack_recovery) fails.push_back("NACK recovery does not precede the NLOS phase");
  const bool onset = r[nlos_onset].feedback == Feedback::Lost &&
                     (nlos_onset == 0 || r[nlos_onset - 1].feedback != Feedback::Lost);
  if (!onset) fails.push_back("LOST onset does not coincide with the first NLOS sample");

  const std::size_t bump = nlos_onset + 5;
  bool lost_run = bump < r.size();
  for (std::size_t i = nlos_onset; lost_run && i < bump; ++i) lost_run = r[i].feedback == Feedback::Lost;
  bool bump_ok = lost_run && r[bump].power_w > r[bump - 1].power_w;
  for (std::size_t i = nlos_onset + 1; bump_ok && i < bump; ++i) bump_ok = r[i].power_w == r[nlos_onset].power_w;
  if (!bump_ok) fails.push_back("power does not rise exactly 5 samples after LOST onset");

  bool wall_ack = false;
  for (std::size_t i = bump < r.size() ? bump : r.size(); i < r.size() && !wall_ack; ++i)
    wall_ack = r[i].feedback == Feedback::Ack && r[i].path_kind == PathKind::WallReflected;
  if (!wall_ack) fails.push_back("no ACK over the wall-reflected path after the power increase");
  return fails;
}

}  // namespace golden
