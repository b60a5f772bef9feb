#include "ris/learner.hpp"

#include <atomic>
#include <exception>
#include <optional>
#include <string>
#include <thread>

#include "ris/error.hpp"

namespace ris {

GroupTrace run_group(GroupEnvironment& env, Agent& agent, std::size_t budget) {
  if (budget == 0) throw ConfigError("learning budget must be >= 1");
  if (env.phases() != agent.phases()) throw DimensionError("agent/environment phase count");
  const auto& cfg = agent.config();
  GroupTrace trace;
  trace.rows.reserve(budget);
  PhaseVector state(env.phases(), env.grid().zero());
  trace.initial_gain = env.reset(state);
  trace.best_gain = -1.0;
  for (std::size_t t = 1; t <= budget; ++t) {
    const double frac =
        budget > 1 ? static_cast<double>(t - 1) / static_cast<double>(budget - 1) : 0.0;
    const double sigma = cfg.noise_initial + (cfg.noise_final - cfg.noise_initial) * frac;
    PhaseVector action = agent.act(state, sigma);
    const StepResult step = env.step(action);
    agent.replay().push(Transition{state, action, step.reward});
    TrainLosses losses;
    const bool trained = agent.train_from_replay(t, &losses);
    if (step.gain > trace.best_gain) {
      trace.best_gain = step.gain;
      trace.best = action;
    }
    trace.rows.push_back({t, step.gain, trace.best_gain, step.reward, trained ? losses.critic : 0.0});
    state = step.next_state;
  }
  return trace;
}

namespace {

struct LevelContext {
  const LearningTask& task;
  const PhaseGrid& grid;
  std::size_t level;
  std::vector<CompositeChannel> effective;  // per user
  std::size_t group_size;
  double normalization;
  std::size_t budget;
};

GroupEnvironment make_environment(const LevelContext& ctx, std::size_t group) {
  std::vector<CompositeChannel> slices;
  slices.reserve(ctx.effective.size());
  for (const auto& eff : ctx.effective) {
    slices.push_back(eff.slice(group * ctx.group_size, ctx.group_size));
  }
  return GroupEnvironment(std::move(slices), ctx.grid, ctx.normalization);
}

std::uint64_t agent_seed(const LearningTask& task, std::size_t level, std::size_t group) {
  return derive_seed(task.seed, "agent", {level, group});
}

}  // namespace

LearnedResult learn_vector(const LearningTask& task) {
  if (task.users.empty()) throw DomainError("learning task has no users");
  const auto& grid = PhaseGrid::of(task.bits);
  const auto& spec = task.levels;
  spec.require_elements(task.users.front().size());
  for (const auto& u : task.users) {
    if (u.size() != spec.elements()) throw DimensionError("learning task: user channel length");
  }
  if (!task.level_budgets.empty() && task.level_budgets.size() != spec.levels()) {
    throw ConfigError("level_budgets needs one entry per level");
  }
  task.agent.validate();

  LevelPhases phases = LevelPhases::zeros(spec, grid);
  std::vector<GroupTrace> traces;
  std::vector<Agent> level_agents;

  for (std::size_t level = 0; level < spec.levels(); ++level) {
    LevelContext ctx{task, grid, level, {}, spec.size(level),
                     static_cast<double>(spec.size(level) * spec.stride(level)),
                     task.level_budgets.empty() ? task.agent.budget : task.level_budgets[level]};
    ctx.effective.reserve(task.users.size());
    for (const auto& u : task.users) {
      ctx.effective.push_back(effective_channel(u, spec, phases, grid, level));
    }
    const std::size_t groups = spec.groups(level);
    std::vector<std::optional<GroupTrace>> level_traces(groups);

    AgentConfig first_cfg = task.agent;
    first_cfg.seed = agent_seed(task, level, 0);
    Agent first(ctx.group_size, task.bits, first_cfg);
    {
      auto env = make_environment(ctx, 0);
      level_traces[0] = run_group(env, first, ctx.budget);
    }

    auto run_sibling = [&](std::size_t g) {
      const std::uint64_t seed = agent_seed(task, level, g);
      Agent agent = [&] {
        if (task.transfer) return Agent::transfer_init(first, ctx.group_size, task.bits, seed);
        AgentConfig cfg = task.agent;
        cfg.seed = seed;
        return Agent(ctx.group_size, task.bits, cfg);
      }();
      auto env = make_environment(ctx, g);
      GroupTrace tr = run_group(env, agent, ctx.budget);
      tr.transferred = task.transfer;
      level_traces[g] = std::move(tr);
    };

    const std::size_t workers = std::min<std::size_t>(std::max<std::size_t>(task.threads, 1),
                                                      groups > 1 ? groups - 1 : 1);
    if (workers <= 1 || groups <= 2) {
      for (std::size_t g = 1; g < groups; ++g) run_sibling(g);
    } else {
      std::atomic<std::size_t> next{1};
      std::vector<std::exception_ptr> errors(workers);
      std::vector<std::thread> pool;
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (std::size_t g = next++; g < groups; g = next++) run_sibling(g);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
      for (auto& t : pool) t.join();
      for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
    }

    for (std::size_t g = 0; g < groups; ++g) {
      GroupTrace& tr = *level_traces[g];
      tr.level = level;
      tr.group = g;
      std::copy(tr.best.begin(), tr.best.end(),
                phases.levels[level].begin() + static_cast<std::ptrdiff_t>(g * ctx.group_size));
      traces.push_back(std::move(tr));
    }
    level_agents.push_back(std::move(first));
  }

  LearnedResult out{synthesize_phases(phases, spec, grid), 0.0, std::move(phases),
                    std::move(traces), std::move(level_agents)};
  out.gain = mean_gain(task.users, out.vector);
  return out;
}

std::size_t iterations_to_reach(const GroupTrace& trace, double threshold) {
  for (const auto& row : trace.rows) {
    if (row.gain >= threshold) return row.iteration;
  }
  return trace.rows.size() + 1;
}

}  // namespace ris
