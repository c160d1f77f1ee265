#include "earq/scenario_io.hpp"

#include <fstream>
#include <optional>
#include <set>
#include <sstream>

namespace earq {

using nlohmann::json;

namespace {

// Walks one JSON object, tracking which keys were consumed so typos surface
// as errors instead of silently falling back to defaults.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + ": expected an object");
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) throw ConfigError(field(key) + ": missing required field");
    return j_.at(key);
  }

  double number(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) throw ConfigError(field(key) + ": expected a number");
    return v.get<double>();
  }
  double number(const std::string& key, double fallback) {
    seen_.insert(key);
    return has(key) ? number(key) : fallback;
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
    seen_.insert(key);
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
      throw ConfigError(field(key) + ": expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  bool boolean(const std::string& key, bool fallback) {
    seen_.insert(key);
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_boolean()) throw ConfigError(field(key) + ": expected true/false");
    return v.get<bool>();
  }

  Vec2d vec2(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      throw ConfigError(field(key) + ": expected [x, y] in meters");
    const Vec2d out(v[0].get<double>(), v[1].get<double>());
    if (!out.allFinite()) throw ConfigError(field(key) + ": coordinates must be finite");
    return out;
  }
  Vec2d vec2(const std::string& key, const Vec2d& fallback) {
    seen_.insert(key);
    return has(key) ? vec2(key) : fallback;
  }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.contains(k)) throw ConfigError(field(k) + ": unknown field");
  }

 private:
  std::string where() const { return path_.empty() ? "<root>" : path_; }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

ArrayConfig<double> read_array(const json& j, const std::string& path, const ArrayConfig<double>& defaults) {
  ObjectReader r(j, path);
  ArrayConfig<double> a = defaults;
  a.num_elements = static_cast<int>(r.unsigned_integer("num_elements", defaults.num_elements));
  a.spacing_wavelengths = r.number("spacing_wavelengths", defaults.spacing_wavelengths);
  a.carrier_hz = r.number("carrier_hz", defaults.carrier_hz);
  a.boresight = r.number("boresight", defaults.boresight);
  a.position = r.vec2("position");
  r.finish();
  return a;
}

json vec2_json(const Vec2d& v) { return json::array({v.x(), v.y()}); }

json array_json(const ArrayConfig<double>& a) {
  return {{"num_elements", a.num_elements},
          {"spacing_wavelengths", a.spacing_wavelengths},
          {"carrier_hz", a.carrier_hz},
          {"boresight", a.boresight},
          {"position", vec2_json(a.position)}};
}

// Maps std::invalid_argument from domain constructors onto the field.
template <typename F>
auto guarded(const std::string& field, F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(field + ": " + e.what());
  }
}

}  // namespace

Scenario scenario_from_json(const json& doc) {
  Scenario sc;
  ObjectReader root(doc, "");

  sc.tx_array = read_array(root.raw("tx_array"), "tx_array", sc.tx_array);
  sc.rx_array = read_array(root.raw("rx_array"), "rx_array", sc.rx_array);

  if (root.has("codebook")) {
    ObjectReader r(root.raw("codebook"), "codebook");
    sc.codebook.n_narrow = r.unsigned_integer("n_narrow", sc.codebook.n_narrow);
    sc.codebook.sector_half_width_rad = r.number("sector_half_width_rad", sc.codebook.sector_half_width_rad);
    if (r.has("wide_element_counts")) {
      const json& w = r.raw("wide_element_counts");
      if (!w.is_array()) throw ConfigError("codebook.wide_element_counts: expected an array of integers");
      sc.codebook.wide_element_counts.clear();
      for (const auto& e : w) {
        if (!e.is_number_integer()) throw ConfigError("codebook.wide_element_counts: expected integers");
        sc.codebook.wide_element_counts.push_back(e.get<int>());
      }
    }
    r.finish();
  }

  if (root.has("obstacles")) {
    const json& obs = root.raw("obstacles");
    if (!obs.is_array()) throw ConfigError("obstacles: expected an array");
    for (std::size_t i = 0; i < obs.size(); ++i) {
      const std::string path = "obstacles[" + std::to_string(i) + "]";
      ObjectReader r(obs[i], path);
      const Vec2d c = r.vec2("center");
      const double side = r.number("side");
      r.finish();
      sc.obstacles.push_back(guarded(path + ".side", [&] { return Obstacle<double>(c, side); }));
    }
  }

  if (root.has("wall")) {
    ObjectReader r(root.raw("wall"), "wall");
    const Vec2d a = r.vec2("endpoint_a");
    const Vec2d b = r.vec2("endpoint_b");
    r.finish();
    sc.wall = guarded("wall", [&] { return Wall<double>(a, b); });
  }

  sc.target_start = root.vec2("target_start");
  sc.target_velocity = root.vec2("target_velocity");
  sc.duration_s = root.number("duration_s");
  sc.dt_s = root.number("dt_s", sc.dt_s);

  if (root.has("link")) {
    ObjectReader r(root.raw("link"), "link");
    sc.link.tx_power_w = r.number("tx_power_w", sc.link.tx_power_w);
    sc.link.bandwidth_hz = r.number("bandwidth_hz", sc.link.bandwidth_hz);
    sc.link.noise_figure_db = r.number("noise_figure_db", sc.link.noise_figure_db);
    sc.link.rcs_m2 = r.number("rcs_m2", sc.link.rcs_m2);
    sc.link.carrier_hz = r.number("carrier_hz", sc.link.carrier_hz);
    r.finish();
  }
  sc.wall_loss_db = root.number("wall_loss_db", sc.wall_loss_db);
  sc.resi_noise_std_db = root.number("resi_noise_std_db", sc.resi_noise_std_db);

  if (root.has("thresholds")) {
    ObjectReader r(root.raw("thresholds"), "thresholds");
    sc.thresholds.ack_db = r.number("ack_db", sc.thresholds.ack_db);
    sc.thresholds.nack_db = r.number("nack_db", sc.thresholds.nack_db);
    r.finish();
  }

  if (root.has("power_schedule")) {
    ObjectReader r(root.raw("power_schedule"), "power_schedule");
    const json& levels = r.raw("levels_w");
    if (!levels.is_array()) throw ConfigError("power_schedule.levels_w: expected an array of watts");
    sc.power_schedule.levels_w.clear();
    for (const auto& e : levels) {
      if (!e.is_number()) throw ConfigError("power_schedule.levels_w: expected numbers");
      sc.power_schedule.levels_w.push_back(e.get<double>());
    }
    r.finish();
    if (!root.has("link") || !doc.at("link").contains("tx_power_w"))
      if (!sc.power_schedule.levels_w.empty()) sc.link.tx_power_w = sc.power_schedule.levels_w.front();
  }

  sc.lost_timer_s = root.number("lost_timer_s", sc.lost_timer_s);
  sc.max_retransmissions = root.unsigned_integer("max_retransmissions", sc.max_retransmissions);
  sc.reduce_power_on_ack = root.boolean("reduce_power_on_ack", sc.reduce_power_on_ack);
  sc.memory_capacity = root.unsigned_integer("memory_capacity", sc.memory_capacity);

  if (root.has("region")) {
    ObjectReader r(root.raw("region"), "region");
    sc.region.x_min = r.number("x_min", sc.region.x_min);
    sc.region.x_max = r.number("x_max", sc.region.x_max);
    sc.region.y_min = r.number("y_min", sc.region.y_min);
    sc.region.y_max = r.number("y_max", sc.region.y_max);
    r.finish();
  }
  sc.target_speed_m_s = root.number("target_speed_m_s", sc.target_speed_m_s);
  sc.rng_seed = root.unsigned_integer("rng_seed", sc.rng_seed);
  root.finish();

  try {
    sc.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return sc;
}

json scenario_to_json(const Scenario& sc) {
  json obstacles = json::array();
  for (const auto& o : sc.obstacles) obstacles.push_back({{"center", vec2_json(o.center)}, {"side", o.side}});
  json doc = {
      {"tx_array", array_json(sc.tx_array)},
      {"rx_array", array_json(sc.rx_array)},
      {"codebook",
       {{"n_narrow", sc.codebook.n_narrow},
        {"wide_element_counts", sc.codebook.wide_element_counts},
        {"sector_half_width_rad", sc.codebook.sector_half_width_rad}}},
      {"obstacles", obstacles},
      {"wall", nullptr},
      {"target_start", vec2_json(sc.target_start)},
      {"target_velocity", vec2_json(sc.target_velocity)},
      {"duration_s", sc.duration_s},
      {"dt_s", sc.dt_s},
      {"link",
       {{"tx_power_w", sc.link.tx_power_w},
        {"bandwidth_hz", sc.link.bandwidth_hz},
        {"noise_figure_db", sc.link.noise_figure_db},
        {"rcs_m2", sc.link.rcs_m2},
        {"carrier_hz", sc.link.carrier_hz}}},
      {"wall_loss_db", sc.wall_loss_db},
      {"resi_noise_std_db", sc.resi_noise_std_db},
      {"thresholds", {{"ack_db", sc.thresholds.ack_db}, {"nack_db", sc.thresholds.nack_db}}},
      {"power_schedule", {{"levels_w", sc.power_schedule.levels_w}}},
      {"lost_timer_s", sc.lost_timer_s},
      {"max_retransmissions", sc.max_retransmissions},
      {"reduce_power_on_ack", sc.reduce_power_on_ack},
      {"memory_capacity", sc.memory_capacity},
      {"region",
       {{"x_min", sc.region.x_min}, {"x_max", sc.region.x_max}, {"y_min", sc.region.y_min}, {"y_max", sc.region.y_max}}},
      {"target_speed_m_s", sc.target_speed_m_s},
      {"rng_seed", sc.rng_seed},
  };
  if (sc.wall)
    doc["wall"] = {{"endpoint_a", vec2_json(sc.wall->endpoint_a)}, {"endpoint_b", vec2_json(sc.wall->endpoint_b)}};
  return doc;
}

namespace {

json parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    // e.what() carries "at line L, column C".
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace

Scenario load_scenario(const std::filesystem::path& path) {
  const json doc = parse_file(path);
  try {
    return scenario_from_json(doc);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::vector<Thresholds> thresholds_grid_from_json(const json& doc) {
  if (!doc.is_array() || doc.empty()) throw ConfigError("thresholds grid: expected a non-empty array");
  std::vector<Thresholds> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string path = "[" + std::to_string(i) + "]";
    const json& e = doc[i];
    Thresholds t;
    if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
      t = {e[0].get<double>(), e[1].get<double>()};
    } else {
      ObjectReader r(e, path);
      t.ack_db = r.number("ack_db");
      t.nack_db = r.number("nack_db");
      r.finish();
    }
    guarded(path, [&] {
      t.validate();
      return 0;
    });
    out.push_back(t);
  }
  return out;
}

std::vector<Thresholds> load_thresholds_grid(const std::filesystem::path& path) {
  const json doc = parse_file(path);
  try {
    return thresholds_grid_from_json(doc);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace earq
