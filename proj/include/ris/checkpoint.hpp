#pragma once

// Agent checkpoints (JSON text: architecture, parameters of all four
// networks, configuration and seed) and training-trace CSV files.

#include <filesystem>
#include <string>

#include "json.hpp"
#include "ris/agent.hpp"
#include "ris/learner.hpp"

namespace ris {

inline constexpr int kCheckpointFormatVersion = 1;

nlohmann::json agent_config_to_json(const AgentConfig& config);
/// Fields missing from `j` keep the values of `base`.
AgentConfig agent_config_from_json(const nlohmann::json& j, AgentConfig base = {});

std::string serialize_agent(const Agent& agent);
Agent parse_agent(const std::string& text);
void save_agent(const std::filesystem::path& path, const Agent& agent);
Agent load_agent(const std::filesystem::path& path);

/// CSV with columns iteration,gain,best_gain,reward,loss, preceded by a
/// `# key=value` comment line when `comment` is non-empty.
std::string trace_csv(const GroupTrace& trace, const std::string& comment = "");

/// Full-precision decimal text for a double (round-trips exactly).
std::string format_double(double value);

}  // namespace ris
