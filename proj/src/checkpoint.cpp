#include "ris/checkpoint.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "ris/error.hpp"

namespace ris {

using nlohmann::json;

json agent_config_to_json(const AgentConfig& c) {
  return json{{"actor_hidden", c.actor_hidden},
              {"critic_hidden", c.critic_hidden},
              {"actor_learning_rate", c.actor_learning_rate},
              {"critic_learning_rate", c.critic_learning_rate},
              {"discount", c.discount},
              {"soft_update", c.soft_update},
              {"noise_initial", c.noise_initial},
              {"noise_final", c.noise_final},
              {"replay_capacity", c.replay_capacity},
              {"batch_size", c.batch_size},
              {"candidates", c.candidates},
              {"budget", c.budget},
              {"seed", c.seed},
              {"exploration", "proto_noise"}};
}

AgentConfig agent_config_from_json(const json& j, AgentConfig c) {
  if (!j.is_object()) throw ConfigError("agent config must be an object");
  auto get = [&j](const char* key, auto& field) {
    if (j.contains(key)) {
      try {
        j.at(key).get_to(field);
      } catch (const json::exception& e) {
        throw ConfigError(std::string("agent config field '") + key + "': " + e.what());
      }
    }
  };
  get("actor_hidden", c.actor_hidden);
  get("critic_hidden", c.critic_hidden);
  get("actor_learning_rate", c.actor_learning_rate);
  get("critic_learning_rate", c.critic_learning_rate);
  get("discount", c.discount);
  get("soft_update", c.soft_update);
  get("noise_initial", c.noise_initial);
  get("noise_final", c.noise_final);
  get("replay_capacity", c.replay_capacity);
  get("batch_size", c.batch_size);
  get("candidates", c.candidates);
  get("budget", c.budget);
  get("seed", c.seed);
  if (j.contains("exploration") && j.at("exploration") != "proto_noise") {
    throw ConfigError("agent config: only exploration = \"proto_noise\" is supported");
  }
  return c;
}

namespace {

json network_to_json(const Mlp& net) {
  return json{{"dims", std::vector<std::size_t>(net.dims().begin(), net.dims().end())},
              {"head", net.head() == OutputHead::kPhase ? "phase" : "linear"},
              {"params", std::vector<double>(net.parameters().begin(), net.parameters().end())}};
}

void network_from_json(const json& j, Mlp& net, const char* name) {
  const auto dims = j.at("dims").get<std::vector<std::size_t>>();
  const auto head = j.at("head").get<std::string>() == "phase" ? OutputHead::kPhase
                                                               : OutputHead::kLinear;
  if (!net.same_architecture(Mlp(dims, head))) {
    throw ConfigError(std::string("checkpoint network '") + name +
                      "' does not match the configured architecture");
  }
  const auto params = j.at("params").get<std::vector<double>>();
  if (params.size() != net.parameter_count()) {
    throw DimensionError(std::string("checkpoint network '") + name + "' parameter count");
  }
  std::copy(params.begin(), params.end(), net.parameters().begin());
}

}  // namespace

std::string serialize_agent(const Agent& agent) {
  json doc{{"format_version", kCheckpointFormatVersion},
           {"phases", agent.phases()},
           {"q", agent.bits()},
           {"config", agent_config_to_json(agent.config())},
           {"actor", network_to_json(agent.actor())},
           {"critic", network_to_json(agent.critic())},
           {"target_actor", network_to_json(agent.target_actor())},
           {"target_critic", network_to_json(agent.target_critic())}};
  return doc.dump();
}

Agent parse_agent(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("checkpoint parse error: ") + e.what(), e.byte);
  }
  try {
    if (doc.at("format_version").get<int>() != kCheckpointFormatVersion) {
      throw ParseError("unsupported checkpoint format_version", 0);
    }
    const auto cfg = agent_config_from_json(doc.at("config"));
    Agent agent(doc.at("phases").get<std::size_t>(), doc.at("q").get<unsigned>(), cfg);
    network_from_json(doc.at("actor"), agent.actor(), "actor");
    network_from_json(doc.at("critic"), agent.critic(), "critic");
    network_from_json(doc.at("target_actor"), agent.target_actor(), "target_actor");
    network_from_json(doc.at("target_critic"), agent.target_critic(), "target_critic");
    return agent;
  } catch (const json::exception& e) {
    throw ParseError(std::string("checkpoint: ") + e.what(), 0);
  }
}

void save_agent(const std::filesystem::path& path, const Agent& agent) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << serialize_agent(agent) << '\n';
}

Agent load_agent(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_agent(ss.str());
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string trace_csv(const GroupTrace& trace, const std::string& comment) {
  std::string out;
  if (!comment.empty()) out += "# " + comment + "\n";
  out += "iteration,gain,best_gain,reward,loss\n";
  for (const auto& r : trace.rows) {
    out += std::to_string(r.iteration) + ',' + format_double(r.gain) + ',' +
           format_double(r.best_gain) + ',' + std::to_string(r.reward) + ',' +
           format_double(r.loss) + '\n';
  }
  return out;
}

}  // namespace ris
