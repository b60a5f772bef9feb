#include "ris/agent.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ris/codebook.hpp"
#include "ris/error.hpp"

namespace ris {

GroupEnvironment::GroupEnvironment(std::vector<CompositeChannel> channels, const PhaseGrid& grid,
                                   double normalization)
    : channels_(std::move(channels)), grid_(&grid), normalization_(normalization) {
  if (channels_.empty()) throw DomainError("environment needs at least one user");
  if (!(normalization_ > 0.0)) throw ConfigError("environment normalization must be positive");
  phases_ = channels_.front().size();
  for (const auto& c : channels_) {
    if (c.size() != phases_) throw DimensionError("environment channels differ in length");
  }
  state_.assign(phases_, grid.zero());
}

double GroupEnvironment::evaluate(std::span<const PhaseIndex> phases) const {
  if (phases.size() != phases_) throw DimensionError("environment: action length");
  double total = 0.0;
  for (const auto& c : channels_) total += std::norm(rotated_sum(c, phases, *grid_));
  return total / (normalization_ * static_cast<double>(channels_.size()));
}

double GroupEnvironment::reset(const PhaseVector& state) {
  state_ = state;
  last_gain_ = evaluate(state_);
  return last_gain_;
}

StepResult GroupEnvironment::step(const PhaseVector& action) {
  for (PhaseIndex p : action) {
    if (!grid_->valid(p)) throw IndexError("environment: action off the grid");
  }
  const double g = evaluate(action);
  const int r = improvement_reward(g, last_gain_);
  state_ = action;
  last_gain_ = g;
  return {state_, r, g};
}

// ---------------------------------------------------------------------------

void AgentConfig::validate() const {
  if (candidates < 1) throw ConfigError("agent: candidate count k must be >= 1");
  if (!(discount >= 0.0 && discount < 1.0)) throw ConfigError("agent: discount must be in [0, 1)");
  if (!(soft_update >= 0.0 && soft_update <= 1.0)) {
    throw ConfigError("agent: soft update tau must be in [0, 1]");
  }
  if (batch_size < 1) throw ConfigError("agent: batch size must be >= 1");
  if (replay_capacity < batch_size) throw ConfigError("agent: replay capacity < batch size");
  if (budget < 1) throw ConfigError("agent: iteration budget must be >= 1");
  if (actor_learning_rate < 0.0 || critic_learning_rate < 0.0) {
    throw ConfigError("agent: negative learning rate");
  }
  if (noise_initial < 0.0 || noise_final < 0.0) throw ConfigError("agent: negative noise scale");
}

void encode_phases(std::span<const PhaseIndex> phases, const PhaseGrid& grid,
                   std::span<double> out) {
  const auto c = grid.cos_table();
  const auto s = grid.sin_table();
  for (std::size_t i = 0; i < phases.size(); ++i) {
    out[2 * i] = c[phases[i]];
    out[2 * i + 1] = s[phases[i]];
  }
}

void encode_phases(std::span<const double> phases, std::span<double> out) {
  for (std::size_t i = 0; i < phases.size(); ++i) {
    out[2 * i] = std::cos(phases[i]);
    out[2 * i + 1] = std::sin(phases[i]);
  }
}

namespace {

std::vector<std::size_t> layer_dims(std::size_t in, const std::vector<std::size_t>& hidden,
                                    std::size_t out) {
  std::vector<std::size_t> dims{in};
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(out);
  return dims;
}

}  // namespace

Agent::Agent(std::size_t phases, unsigned bits, AgentConfig config)
    : phases_(phases), bits_(bits), config_(std::move(config)), rng_(config_.seed) {
  if (phases_ == 0) throw ConfigError("agent needs at least one phase");
  config_.validate();
  (void)PhaseGrid::of(bits_);
  if (config_.candidates > phases_ + 1) {
    warn("agent: k = " + std::to_string(config_.candidates) + " exceeds phases + 1; clamped to " +
         std::to_string(phases_ + 1));
    config_.candidates = phases_ + 1;
  }
  actor_ = Mlp(layer_dims(2 * phases_, config_.actor_hidden, phases_), OutputHead::kPhase);
  critic_ = Mlp(layer_dims(4 * phases_, config_.critic_hidden, 1), OutputHead::kLinear);
  actor_.initialize(rng_);
  critic_.initialize(rng_);
  target_actor_ = actor_;
  target_critic_ = critic_;
  actor_opt_ = Adam(actor_.parameter_count(), config_.actor_learning_rate);
  critic_opt_ = Adam(critic_.parameter_count(), config_.critic_learning_rate);
  replay_ = ReplayBuffer(config_.replay_capacity);
}

std::vector<double> Agent::proto_action(std::span<const PhaseIndex> state) const {
  if (state.size() != phases_) throw DimensionError("proto_action: state length");
  std::vector<double> x(2 * phases_);
  encode_phases(state, grid(), x);
  return actor_.forward(x);
}

double Agent::value(std::span<const PhaseIndex> state, std::span<const PhaseIndex> action) const {
  std::vector<double> x(4 * phases_);
  encode_phases(state, grid(), std::span<double>(x).first(2 * phases_));
  encode_phases(action, grid(), std::span<double>(x).subspan(2 * phases_));
  return critic_.forward(x)[0];
}

PhaseVector Agent::act(std::span<const PhaseIndex> state, double noise_sigma) {
  auto proto = proto_action(state);
  if (noise_sigma > 0.0) {
    std::normal_distribution<double> noise(0.0, noise_sigma);
    for (double& p : proto) p = wrap_angle(p + noise(rng_));
  }
  const auto candidates = knn_project(proto, grid(), config_.candidates);
  if (candidates.size() == 1) return candidates.front();
  const ActionValue q = [this](std::span<const PhaseIndex> s, std::span<const PhaseIndex> a) {
    return value(s, a);
  };
  return candidates[select_action(q, state, candidates)];
}

TrainLosses Agent::train_step(std::span<const Transition* const> batch, std::size_t iteration) {
  if (batch.empty()) throw DomainError("train_step with an empty batch");
  const std::size_t n2 = 2 * phases_;
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  const auto& g = grid();

  std::vector<double> critic_in(2 * n2);
  std::vector<double> actor_in(n2);
  std::vector<double> next_in(n2);
  std::vector<double> target_in(2 * n2);
  std::vector<double> grad_critic(critic_.parameter_count(), 0.0);
  Mlp::Cache cache;
  TrainLosses losses;

  // Critic: regress Q(s, a) toward r + gamma Q'(s', mu'(s')).
  for (const Transition* t : batch) {
    encode_phases(t->action, g, next_in);
    const auto next_proto = target_actor_.forward(next_in);
    std::copy(next_in.begin(), next_in.end(), target_in.begin());
    encode_phases(std::span<const double>(next_proto), std::span<double>(target_in).subspan(n2));
    const double target =
        static_cast<double>(t->reward) + config_.discount * target_critic_.forward(target_in)[0];

    encode_phases(t->state, g, std::span<double>(critic_in).first(n2));
    encode_phases(t->action, g, std::span<double>(critic_in).subspan(n2));
    critic_.forward(critic_in, cache);
    const double diff = cache.activations.back()[0] - target;
    losses.critic += diff * diff * inv_b;
    const double grad_out = 2.0 * diff * inv_b;
    critic_.backward(cache, std::span<const double>(&grad_out, 1), grad_critic);
  }
  if (!std::isfinite(losses.critic)) {
    throw TrainingError("critic loss is not finite at iteration " + std::to_string(iteration),
                        iteration);
  }
  critic_opt_.step(critic_.parameters(), grad_critic);

  // Actor: ascend Q(s, mu(s)) through the critic.
  std::vector<double> grad_actor(actor_.parameter_count(), 0.0);
  std::vector<double> grad_in(2 * n2);
  std::vector<double> grad_proto(phases_);
  Mlp::Cache actor_cache;
  for (const Transition* t : batch) {
    encode_phases(t->state, g, actor_in);
    actor_.forward(actor_in, actor_cache);
    const auto& proto = actor_cache.activations.back();
    std::copy(actor_in.begin(), actor_in.end(), critic_in.begin());
    encode_phases(std::span<const double>(proto), std::span<double>(critic_in).subspan(n2));
    critic_.forward(critic_in, cache);
    losses.actor -= cache.activations.back()[0] * inv_b;
    const double grad_out = -inv_b;
    critic_.backward(cache, std::span<const double>(&grad_out, 1), {}, grad_in);
    for (std::size_t i = 0; i < phases_; ++i) {
      const double dcos = grad_in[n2 + 2 * i];
      const double dsin = grad_in[n2 + 2 * i + 1];
      grad_proto[i] = -dcos * std::sin(proto[i]) + dsin * std::cos(proto[i]);
    }
    actor_.backward(actor_cache, grad_proto, grad_actor);
  }
  if (!std::isfinite(losses.actor)) {
    throw TrainingError("actor objective is not finite at iteration " + std::to_string(iteration),
                        iteration);
  }
  actor_opt_.step(actor_.parameters(), grad_actor);

  target_actor_.soft_update(actor_, config_.soft_update);
  target_critic_.soft_update(critic_, config_.soft_update);
  return losses;
}

bool Agent::train_from_replay(std::size_t iteration, TrainLosses* losses) {
  if (replay_.size() < config_.batch_size) return false;
  const auto batch = replay_.sample(config_.batch_size, rng_);
  const auto l = train_step(batch, iteration);
  if (losses != nullptr) *losses = l;
  return true;
}

Agent Agent::transfer_init(const Agent& source, std::size_t phases, unsigned bits,
                           std::uint64_t seed) {
  if (source.phases_ != phases || source.bits_ != bits) {
    throw ConfigError("transfer_init: source agent was built for " +
                      std::to_string(source.phases_) + " phases at q = " +
                      std::to_string(source.bits_) + ", target needs " + std::to_string(phases) +
                      " at q = " + std::to_string(bits));
  }
  AgentConfig cfg = source.config_;
  cfg.seed = seed;
  Agent out(phases, bits, cfg);
  out.actor_ = source.actor_;
  out.critic_ = source.critic_;
  out.target_actor_ = source.target_actor_;
  out.target_critic_ = source.target_critic_;
  out.reset_optimizers();
  return out;
}

void Agent::reset_optimizers() {
  actor_opt_ = Adam(actor_.parameter_count(), config_.actor_learning_rate);
  critic_opt_ = Adam(critic_.parameter_count(), config_.critic_learning_rate);
}

}  // namespace ris
