#include "ris/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ris/checkpoint.hpp"
#include "ris/error.hpp"
#include "ris/rng.hpp"

namespace ris {

using nlohmann::json;

namespace {

constexpr double kDeg = kPi / 180.0;

template <typename T>
void read(const json& j, const char* key, T& field) {
  if (!j.contains(key)) return;
  try {
    j.at(key).get_to(field);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

double read_deg(const json& j, const char* key, double fallback_rad) {
  double deg = fallback_rad / kDeg;
  read(j, key, deg);
  return deg * kDeg;
}

SurfaceGeometry geometry_from_json(const json& g) {
  const std::string type = g.value("type", "ula");
  if (type == "ula") {
    return SurfaceGeometry::ula(g.at("elements").get<std::size_t>(), g.value("spacing", 0.5));
  }
  if (type == "distributed") {
    return SurfaceGeometry::distributed_ula(g.at("surfaces").get<std::size_t>(),
                                            g.at("elements_per_surface").get<std::size_t>(),
                                            g.value("gap", 2.0), g.value("spacing", 0.5));
  }
  if (type == "explicit") {
    std::vector<Position> pos;
    for (const auto& p : g.at("elements")) {
      pos.push_back({p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()});
    }
    std::vector<SubSurface> subs;
    if (g.contains("subsurfaces")) {
      for (const auto& s : g.at("subsurfaces")) {
        subs.push_back({s.at(0).get<std::size_t>(), s.at(1).get<std::size_t>()});
      }
    }
    return SurfaceGeometry(std::move(pos), std::move(subs));
  }
  throw ConfigError("unknown geometry type '" + type + "'");
}

json geometry_to_json(const SurfaceGeometry& g) {
  json elements = json::array();
  for (const auto& p : g.elements()) elements.push_back({p.x, p.y, p.z});
  json subs = json::array();
  for (const auto& s : g.subsurfaces()) subs.push_back({s.start, s.size});
  return json{{"type", "explicit"}, {"elements", elements}, {"subsurfaces", subs}};
}

}  // namespace

ScenarioSpec scenario_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("scenario must be an object");
  try {
    ScenarioSpec spec;
    spec.geometry = geometry_from_json(j.at("geometry"));
    if (j.contains("transmitter")) {
      const json& t = j.at("transmitter");
      spec.transmitter.aoa_center = read_deg(t, "aoa_center_deg", 0.0);
      spec.transmitter.path_spread = read_deg(t, "path_spread_deg", spec.transmitter.path_spread);
      read(t, "power", spec.transmitter.power);
      read(t, "path_decay", spec.transmitter.path_decay);
      read(t, "paths", spec.transmitter.paths);
    }
    for (const json& c : j.at("clusters")) {
      ClusterSpec cl;
      cl.aoa_center = read_deg(c, "aoa_center_deg", 0.0);
      cl.user_spread = read_deg(c, "user_spread_deg", cl.user_spread);
      cl.path_spread = read_deg(c, "path_spread_deg", cl.path_spread);
      read(c, "power", cl.power);
      read(c, "path_decay", cl.path_decay);
      read(c, "users", cl.users);
      read(c, "paths", cl.paths);
      read(c, "shared_paths", cl.shared_paths);
      read(c, "gain_jitter", cl.gain_jitter);
      spec.clusters.push_back(cl);
    }
    if (j.contains("visibility")) {
      const json& v = j.at("visibility");
      const std::string mode = v.value("mode", "none");
      if (mode == "none") {
        spec.visibility.mode = VisibilitySpec::Mode::kNone;
      } else if (mode == "per_element") {
        spec.visibility.mode = VisibilitySpec::Mode::kPerElement;
      } else if (mode == "per_subsurface") {
        spec.visibility.mode = VisibilitySpec::Mode::kPerSubsurface;
      } else {
        throw ConfigError("unknown visibility mode '" + mode + "'");
      }
      if (v.contains("intervals_deg")) {
        for (const json& iv : v.at("intervals_deg")) {
          spec.visibility.intervals.push_back(
              {iv.at(0).get<double>() * kDeg, iv.at(1).get<double>() * kDeg});
        }
      }
    }
    read(j, "nonstationary", spec.nonstationary);
    read(j, "transmit_power", spec.transmit_power);
    read(j, "noise_variance", spec.noise_variance);
    read(j, "seed", spec.seed);
    return spec;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
}

json scenario_to_json(const ScenarioSpec& spec) {
  json clusters = json::array();
  for (const auto& c : spec.clusters) {
    clusters.push_back({{"aoa_center_deg", c.aoa_center / kDeg},
                        {"user_spread_deg", c.user_spread / kDeg},
                        {"path_spread_deg", c.path_spread / kDeg},
                        {"power", c.power},
                        {"path_decay", c.path_decay},
                        {"users", c.users},
                        {"paths", c.paths},
                        {"shared_paths", c.shared_paths},
                        {"gain_jitter", c.gain_jitter}});
  }
  const auto& t = spec.transmitter;
  json vis{{"mode", spec.visibility.mode == VisibilitySpec::Mode::kNone         ? "none"
                    : spec.visibility.mode == VisibilitySpec::Mode::kPerElement ? "per_element"
                                                                                : "per_subsurface"}};
  json intervals = json::array();
  for (const auto& iv : spec.visibility.intervals) intervals.push_back({iv.min / kDeg, iv.max / kDeg});
  vis["intervals_deg"] = intervals;
  return json{{"geometry", geometry_to_json(spec.geometry)},
              {"transmitter",
               {{"aoa_center_deg", t.aoa_center / kDeg},
                {"path_spread_deg", t.path_spread / kDeg},
                {"power", t.power},
                {"path_decay", t.path_decay},
                {"paths", t.paths}}},
              {"clusters", clusters},
              {"visibility", vis},
              {"nonstationary", spec.nonstationary},
              {"transmit_power", spec.transmit_power},
              {"noise_variance", spec.noise_variance},
              {"seed", spec.seed}};
}

void ExperimentConfig::validate() const {
  if (!scenario && !channels_file) throw ConfigError("config needs a scenario or channels_file");
  if (scenario && channels_file) {
    throw ConfigError("config has both a scenario and a channels_file; choose one");
  }
  (void)PhaseGrid::of(q);
  if (beams < 1) throw ConfigError("codebook size N must be >= 1");
  if (!levels.empty()) {
    const LevelSpec spec(levels);
    if (scenario) spec.require_elements(scenario->geometry.size());
  }
  if (baselines.dft_size < 1) throw ConfigError("dft_size must be >= 1");
  if (clustering.sensing_beams < 1) throw ConfigError("sensing_beams must be >= 1");
  agent.validate();
}

ExperimentConfig config_from_json(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;
  if (j.contains("scenario")) c.scenario = scenario_from_json(j.at("scenario"));
  if (j.contains("channels_file")) {
    std::filesystem::path p = j.at("channels_file").get<std::string>();
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    c.channels_file = p;
  }
  read(j, "q", c.q);
  read(j, "levels", c.levels);
  read(j, "beams", c.beams);
  if (j.contains("agent")) c.agent = agent_config_from_json(j.at("agent"), c.agent);
  read(j, "level_budgets", c.level_budgets);
  read(j, "learn", c.learn);
  read(j, "transfer", c.transfer);
  if (j.contains("baselines")) {
    const json& b = j.at("baselines");
    read(b, "dft_size", c.baselines.dft_size);
    read(b, "oracle", c.baselines.oracle);
    read(b, "exhaustive", c.baselines.exhaustive);
    read(b, "exhaustive_limit", c.baselines.exhaustive_limit);
  }
  if (j.contains("clustering")) {
    const json& k = j.at("clustering");
    read(k, "sensing_beams", c.clustering.sensing_beams);
    read(k, "measurement_noise", c.clustering.measurement_noise);
    read(k, "max_iterations", c.clustering.max_iterations);
  }
  read(j, "seed", c.seed);
  read(j, "threads", c.threads);
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  if (c.scenario) j["scenario"] = scenario_to_json(*c.scenario);
  if (c.channels_file) j["channels_file"] = c.channels_file->string();
  j["q"] = c.q;
  j["levels"] = c.levels;
  j["beams"] = c.beams;
  j["agent"] = agent_config_to_json(c.agent);
  j["level_budgets"] = c.level_budgets;
  j["learn"] = c.learn;
  j["transfer"] = c.transfer;
  j["baselines"] = {{"dft_size", c.baselines.dft_size},
                    {"oracle", c.baselines.oracle},
                    {"exhaustive", c.baselines.exhaustive},
                    {"exhaustive_limit", c.baselines.exhaustive_limit}};
  j["clustering"] = {{"sensing_beams", c.clustering.sensing_beams},
                     {"measurement_noise", c.clustering.measurement_noise},
                     {"max_iterations", c.clustering.max_iterations}};
  j["seed"] = c.seed;
  // threads is omitted: results do not depend on it.
  return j;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("config " + path.string() + ": " + e.what(), e.byte);
  }
  return config_from_json(j, path.parent_path());
}

std::string config_hash(const ExperimentConfig& config) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(config_to_json(config).dump())));
  return buf;
}

}  // namespace ris
