#pragma once

// Sequential multi-level learning of one interaction vector.
//
// Level 1 learns P_1 phases for each of the M / P_1 sub-arrays; every higher
// level learns combining phases on the effective channels formed by the frozen
// lower levels. Within a level the first group trains from scratch and its
// siblings start from a copy of its trained agent.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ris/agent.hpp"
#include "ris/codebook.hpp"
#include "ris/multilevel.hpp"

namespace ris {

struct TraceRow {
  std::size_t iteration = 0;  // 1-based
  double gain = 0.0;
  double best_gain = 0.0;
  int reward = -1;
  double loss = 0.0;  // critic loss of this iteration's update (0 before training starts)
};

struct GroupTrace {
  std::size_t level = 0;  // 0-based
  std::size_t group = 0;
  bool transferred = false;
  double initial_gain = 0.0;  // gain of the all-zero starting state
  std::vector<TraceRow> rows;
  PhaseVector best;
  double best_gain = 0.0;
};

/// Runs the environment/agent loop for `budget` iterations from the all-zero
/// state, training after every step once the replay buffer holds a batch.
GroupTrace run_group(GroupEnvironment& env, Agent& agent, std::size_t budget);

struct LearningTask {
  std::vector<CompositeChannel> users;
  LevelSpec levels{std::vector<std::size_t>{1}};
  unsigned bits = 1;
  AgentConfig agent;
  std::vector<std::size_t> level_budgets;  // per level; empty means agent.budget everywhere
  bool transfer = true;
  std::size_t threads = 1;
  std::uint64_t seed = 0;
};

struct LearnedResult {
  InteractionVector vector = InteractionVector::zeros(1, 1);
  double gain = 0.0;  // mean full-array gain over the task's users
  LevelPhases phases;
  std::vector<GroupTrace> traces;  // level-major, group order
  std::vector<Agent> level_agents;  // the first trained agent of every level
};

LearnedResult learn_vector(const LearningTask& task);

/// First 1-based iteration whose gain reaches `threshold`; budget + 1 if never.
std::size_t iterations_to_reach(const GroupTrace& trace, double threshold);

}  // namespace ris
