#pragma once

// Serialisation of traces and statistics. Every writer goes through
// write_file_atomic so a reader never sees a half-written file.

#include "earq/detector.hpp"
#include "earq/sim_engine.hpp"

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace earq {

inline constexpr const char* kTraceCsvHeader =
    "t_s,target_x_m,target_y_m,path_kind,nlos,resi_db,resi_noisefree_db,outcome,feedback,tx_beam,rx_beam,power_w,"
    "ue_snr_db";

std::string trace_csv(const Trace& trace);

/// Feedback transitions, power increases and the termination summary.
nlohmann::json trace_events(const Trace& trace);

nlohmann::json stats_json(const StatsTable& stats);
std::string stats_csv(const std::vector<StatsTable>& rows);

struct ThresholdSweepRow {
  Thresholds thresholds;
  StatsTable stats;
};

nlohmann::json sweep_json(const std::vector<ThresholdSweepRow>& rows);
std::string sweep_csv(const std::vector<ThresholdSweepRow>& rows);

/// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace earq
