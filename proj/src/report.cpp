#include "earq/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace earq {

using nlohmann::json;

namespace {

std::string sig6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Round-trip precision, matching what the JSON writer emits.
std::string full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

constexpr const char* kStatsColumns =
    "ack_pct,nack_pct,lost_pct,notfound_pct,nlos_pct,additional_resources_pct,run_count";

std::string stats_fields(const StatsTable& s) {
  return full(s.ack_pct) + "," + full(s.nack_pct) + "," + full(s.lost_pct) + "," + full(s.notfound_pct) + "," +
         full(s.nlos_pct) + "," + full(s.additional_resources_pct) + "," + std::to_string(s.run_count);
}

}  // namespace

std::string trace_csv(const Trace& trace) {
  std::string out = kTraceCsvHeader;
  out += '\n';
  for (const auto& r : trace.records) {
    out += sig6(r.time_s) + ',' + sig6(r.target_position.x()) + ',' + sig6(r.target_position.y()) + ',';
    out += std::string(to_string(r.path_kind)) + ',' + (r.nlos_flag ? "1" : "0") + ',';
    out += sig6(r.resi_db) + ',' + sig6(r.resi_noise_free_db) + ',';
    out += std::string(to_string(r.outcome)) + ',' + std::string(to_string(r.feedback)) + ',';
    out += std::to_string(r.tx_beam_index) + ',' + std::to_string(r.rx_beam_index) + ',';
    out += sig6(r.power_w) + ',' + sig6(r.ue_snr_db) + '\n';
  }
  return out;
}

json trace_events(const Trace& trace) {
  json events = json::array();
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const auto& r = trace.records[i];
    if (i == 0 || r.feedback != trace.records[i - 1].feedback)
      events.push_back({{"time_s", r.time_s}, {"event", to_string(r.feedback)}});
    if (i > 0 && r.power_w > trace.records[i - 1].power_w)
      events.push_back({{"time_s", r.time_s}, {"event", "POWER_INCREASE"}});
  }
  if (trace.termination)
    events.push_back({{"time_s", trace.end_time_s}, {"event", std::string("TERMINATED_") + std::string(to_string(*trace.termination))}});
  return events;
}

json stats_json(const StatsTable& s) {
  return {{"ack_pct", s.ack_pct},   {"nack_pct", s.nack_pct}, {"lost_pct", s.lost_pct},
          {"notfound_pct", s.notfound_pct}, {"nlos_pct", s.nlos_pct},
          {"additional_resources_pct", s.additional_resources_pct}, {"run_count", s.run_count}};
}

std::string stats_csv(const std::vector<StatsTable>& rows) {
  std::string out = std::string(kStatsColumns) + '\n';
  for (const auto& s : rows) out += stats_fields(s) + '\n';
  return out;
}

json sweep_json(const std::vector<ThresholdSweepRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    json row = stats_json(r.stats);
    row["ack_db"] = r.thresholds.ack_db;
    row["nack_db"] = r.thresholds.nack_db;
    out.push_back(std::move(row));
  }
  return out;
}

std::string sweep_csv(const std::vector<ThresholdSweepRow>& rows) {
  std::string out = std::string("ack_db,nack_db,") + kStatsColumns + '\n';
  for (const auto& r : rows)
    out += full(r.thresholds.ack_db) + ',' + full(r.thresholds.nack_db) + ',' + stats_fields(r.stats) + '\n';
  return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(tmp.string() + ": cannot open for writing");
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error(tmp.string() + ": write failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error(path.string() + ": " + ec.message());
  }
}

}  // namespace earq
