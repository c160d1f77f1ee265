#include "earq/detector.hpp"

#include <cmath>
#include <stdexcept>

namespace earq {

void Thresholds::validate() const {
  if (!std::isfinite(ack_db) || !std::isfinite(nack_db))
    throw std::invalid_argument("thresholds: values must be finite");
  if (!(ack_db > nack_db)) throw std::invalid_argument("thresholds.ack_db must exceed thresholds.nack_db");
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::Detected: return "DETECTED";
    case Outcome::Possible: return "POSSIBLE";
    case Outcome::Absent: return "ABSENT";
  }
  return "?";
}

std::string_view to_string(Feedback f) {
  switch (f) {
    case Feedback::Ack: return "ACK";
    case Feedback::Nack: return "NACK";
    case Feedback::Lost: return "LOST";
    case Feedback::NotFound: return "NOT_FOUND";
  }
  return "?";
}

std::optional<Feedback> parse_feedback(std::string_view s) {
  for (Feedback f : {Feedback::Ack, Feedback::Nack, Feedback::Lost, Feedback::NotFound})
    if (to_string(f) == s) return f;
  return std::nullopt;
}

SensingMemory::SensingMemory(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("sensing memory capacity must be >= 1");
}

SensingMemory SensingMemory::update(double time_s, Outcome outcome, Feedback feedback, std::size_t tx_beam,
                                    std::size_t rx_beam) const {
  if (!history_.empty() && !(time_s > history_.back().time_s))
    throw std::invalid_argument("sensing memory: time must be strictly increasing");
  SensingMemory next = *this;
  next.history_.push_back({time_s, outcome, feedback, rx_beam, tx_beam});
  if (next.history_.size() > capacity_) next.history_.pop_front();
  if (feedback == Feedback::Ack) {
    next.tracked_ = true;
    next.last_ack_time_ = time_s;
  } else if (feedback == Feedback::NotFound) {
    next.tracked_ = false;
  }
  return next;
}

Outcome classify(double resi_db, const Thresholds& thr) {
  if (resi_db >= thr.ack_db) return Outcome::Detected;
  if (resi_db >= thr.nack_db) return Outcome::Possible;
  return Outcome::Absent;
}

Feedback decide_feedback(Outcome outcome, const SensingMemory& mem) {
  switch (outcome) {
    case Outcome::Detected: return Feedback::Ack;
    case Outcome::Possible: return Feedback::Nack;
    case Outcome::Absent: break;
  }
  return mem.tracked() ? Feedback::Lost : Feedback::NotFound;
}

}  // namespace earq
