#pragma once

#include "earq/scenario.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace earq {

/// Raised for unreadable, malformed or invalid configuration files. The
/// message names the offending field or the parse location.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Scenario scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const Scenario& scenario);
Scenario load_scenario(const std::filesystem::path& path);

/// Accepts `[{"ack_db": a, "nack_db": n}, ...]` or `[[a, n], ...]`.
std::vector<Thresholds> thresholds_grid_from_json(const nlohmann::json& doc);
std::vector<Thresholds> load_thresholds_grid(const std::filesystem::path& path);

}  // namespace earq
