#pragma once

// Memory-enabled dual-threshold detection. A RESI sample is classified
// against a pass and a fail threshold; the sensing memory then splits the
// "absent" outcome into LOST (a tracked target vanished) and NOT_FOUND.

#include <cstddef>
#include <deque>
#include <optional>
#include <string_view>

namespace earq {

struct Thresholds {
  double ack_db = 10.0;
  double nack_db = 0.0;

  void validate() const;
};

enum class Outcome { Absent = 0, Possible = 1, Detected = 2 };

enum class Feedback { Ack, Nack, Lost, NotFound };

std::string_view to_string(Outcome o);
/// ACK / NACK / LOST / NOT_FOUND.
std::string_view to_string(Feedback f);
std::optional<Feedback> parse_feedback(std::string_view s);

struct MemoryEntry {
  double time_s;
  Outcome outcome;
  Feedback feedback;
  std::size_t rx_beam_index;
  std::size_t tx_beam_index;
};

class SensingMemory {
 public:
  static constexpr std::size_t kDefaultCapacity = 20;

  explicit SensingMemory(std::size_t capacity = kDefaultCapacity);

  /// Returns the updated memory; *this is left untouched.
  [[nodiscard]] SensingMemory update(double time_s, Outcome outcome, Feedback feedback, std::size_t tx_beam,
                                     std::size_t rx_beam) const;

  const std::deque<MemoryEntry>& history() const { return history_; }
  std::size_t capacity() const { return capacity_; }
  std::optional<double> last_ack_time() const { return last_ack_time_; }
  bool tracked() const { return tracked_; }

 private:
  std::size_t capacity_;
  std::deque<MemoryEntry> history_;
  std::optional<double> last_ack_time_;
  bool tracked_ = false;
};

/// resi >= ack -> Detected; nack <= resi < ack -> Possible; else Absent.
Outcome classify(double resi_db, const Thresholds& thr);

Feedback decide_feedback(Outcome outcome, const SensingMemory& mem);

}  // namespace earq
