#pragma once

// Receive-power-only learning of one group of phases: environment with the
// binary improvement reward, and a deterministic-policy actor-critic agent
// with target networks, experience replay and Wolpertinger-style discrete
// action refinement.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ris/mlp.hpp"
#include "ris/phase_grid.hpp"
#include "ris/replay.hpp"
#include "ris/rng.hpp"
#include "ris/scenario.hpp"
#include "ris/wolpertinger.hpp"

namespace ris {

/// +1 iff the gain strictly improved, -1 otherwise (ties included).
inline int improvement_reward(double gain, double previous_gain) {
  return gain > previous_gain ? +1 : -1;
}

struct StepResult {
  PhaseVector next_state;
  int reward;
  double gain;
};

/// Mean gain over a set of users for one group of phases. Each user's
/// channel is the group's slice of its (effective) channel; gains are
/// normalized by the number of physical elements the group covers.
class GroupEnvironment {
 public:
  GroupEnvironment(std::vector<CompositeChannel> channels, const PhaseGrid& grid,
                   double normalization);

  std::size_t phases() const { return phases_; }
  const PhaseGrid& grid() const { return *grid_; }
  std::span<const CompositeChannel> channels() const { return channels_; }

  /// Mean over users of |sum_p c_p exp(j theta_p)|^2 / normalization.
  double evaluate(std::span<const PhaseIndex> phases) const;

  /// Sets the current state and measures its gain.
  double reset(const PhaseVector& state);

  /// Applies the action (which becomes the next state) and returns the
  /// improvement reward against the previous measurement.
  StepResult step(const PhaseVector& action);

  const PhaseVector& state() const { return state_; }
  double last_gain() const { return last_gain_; }

 private:
  std::vector<CompositeChannel> channels_;
  const PhaseGrid* grid_;
  double normalization_;
  std::size_t phases_;
  PhaseVector state_;
  double last_gain_ = 0.0;
};

struct AgentConfig {
  std::vector<std::size_t> actor_hidden{64, 32};
  std::vector<std::size_t> critic_hidden{64, 32};
  double actor_learning_rate = 1e-4;
  double critic_learning_rate = 1e-3;
  double discount = 0.99;
  double soft_update = 0.01;
  // Gaussian exploration noise (radians) added to proto-actions; decays
  // linearly from initial to final over the iteration budget.
  double noise_initial = 0.5;
  double noise_final = 0.05;
  std::size_t replay_capacity = 10000;
  std::size_t batch_size = 64;
  std::size_t candidates = 8;
  std::size_t budget = 1000;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TrainLosses {
  double critic = 0.0;
  double actor = 0.0;  // mean -Q(s, mu(s))
};

/// (cos, sin) feature pairs for a vector of phases.
void encode_phases(std::span<const PhaseIndex> phases, const PhaseGrid& grid,
                   std::span<double> out);
void encode_phases(std::span<const double> phases, std::span<double> out);

class Agent {
 public:
  /// Fresh agent for `phases` simultaneous phases on the grid.
  Agent(std::size_t phases, unsigned bits, AgentConfig config);

  std::size_t phases() const { return phases_; }
  unsigned bits() const { return bits_; }
  const PhaseGrid& grid() const { return PhaseGrid::of(bits_); }
  const AgentConfig& config() const { return config_; }

  const Mlp& actor() const { return actor_; }
  const Mlp& critic() const { return critic_; }
  const Mlp& target_actor() const { return target_actor_; }
  const Mlp& target_critic() const { return target_critic_; }
  Mlp& actor() { return actor_; }
  Mlp& critic() { return critic_; }
  Mlp& target_actor() { return target_actor_; }
  Mlp& target_critic() { return target_critic_; }

  const ReplayBuffer& replay() const { return replay_; }
  ReplayBuffer& replay() { return replay_; }
  Rng& rng() { return rng_; }

  /// Deterministic continuous phases in (-pi, pi] from the online actor.
  std::vector<double> proto_action(std::span<const PhaseIndex> state) const;

  /// Critic estimate Q(state, action).
  double value(std::span<const PhaseIndex> state, std::span<const PhaseIndex> action) const;

  /// Proto-action plus exploration noise, projected to candidates and
  /// refined by the critic.
  PhaseVector act(std::span<const PhaseIndex> state, double noise_sigma);

  /// One actor-critic update on a batch; `iteration` labels errors.
  TrainLosses train_step(std::span<const Transition* const> batch, std::size_t iteration = 0);

  /// Samples a batch from the replay buffer and trains (no-op while the
  /// buffer holds fewer than batch_size transitions).
  bool train_from_replay(std::size_t iteration, TrainLosses* losses = nullptr);

  /// Copy of every network (online and target); empty replay buffer, fresh
  /// optimizer state and a new random stream. Throws ConfigError if the
  /// source was built for a different number of phases or grid.
  static Agent transfer_init(const Agent& source, std::size_t phases, unsigned bits,
                             std::uint64_t seed);

  void reset_optimizers();

 private:
  std::size_t phases_;
  unsigned bits_;
  AgentConfig config_;
  Mlp actor_;
  Mlp critic_;
  Mlp target_actor_;
  Mlp target_critic_;
  Adam actor_opt_;
  Adam critic_opt_;
  ReplayBuffer replay_;
  Rng rng_;
};

}  // namespace ris
