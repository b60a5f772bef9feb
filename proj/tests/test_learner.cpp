#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "ris/error.hpp"
#include "ris/learner.hpp"

using namespace ris;

namespace {

AgentConfig quick_agent(std::size_t budget) {
  AgentConfig c;
  c.discount = 0.0;
  c.actor_learning_rate = 3e-3;
  c.critic_learning_rate = 1e-2;
  c.batch_size = 16;
  c.budget = budget;
  return c;
}

std::vector<CompositeChannel> random_users(std::size_t n, std::size_t m, std::uint64_t seed) {
  std::mt19937_64 r(seed);
  std::vector<CompositeChannel> out;
  for (std::size_t u = 0; u < n; ++u) out.emplace_back(oracle::random_channel(m, r));
  return out;
}

// Single plane wave with a random direction and a random complex gain.
CompositeChannel plane_wave(std::size_t m, std::mt19937_64& r) {
  std::uniform_real_distribution<double> u(-oracle::pi, oracle::pi);
  const double spatial = u(r);
  const double offset = u(r);
  std::vector<Complex> c(m);
  for (std::size_t i = 0; i < m; ++i) c[i] = std::polar(1.0, offset + spatial * static_cast<double>(i));
  return CompositeChannel(std::move(c));
}

}  // namespace

TEST_CASE("group trace bookkeeping") {
  const auto& g = PhaseGrid::of(2);
  GroupEnvironment env(random_users(3, 5, 1), g, 5.0);
  auto cfg = quick_agent(120);
  cfg.seed = 4;
  Agent agent(5, 2, cfg);
  const auto tr = run_group(env, agent, 120);
  REQUIRE(tr.rows.size() == 120);
  CHECK(tr.initial_gain == doctest::Approx(env.evaluate(PhaseVector(5, g.zero()))));

  double prev = tr.initial_gain;
  double best = -1.0;
  for (std::size_t i = 0; i < tr.rows.size(); ++i) {
    const auto& row = tr.rows[i];
    CHECK(row.iteration == i + 1);
    CHECK(row.reward == (row.gain > prev ? 1 : -1));
    best = std::max(best, row.gain);
    CHECK(row.best_gain == best);
    if (i > 0) CHECK(row.best_gain >= tr.rows[i - 1].best_gain);
    // No update before the replay buffer holds one batch.
    if (row.iteration < cfg.batch_size) CHECK(row.loss == 0.0);
    prev = row.gain;
  }
  CHECK(tr.best_gain == best);
  CHECK(env.evaluate(tr.best) == tr.best_gain);
  CHECK(agent.replay().size() == 120);
}

TEST_CASE("run_group argument checks") {
  const auto& g = PhaseGrid::of(1);
  GroupEnvironment env(random_users(1, 3, 2), g, 3.0);
  Agent agent(4, 1, quick_agent(10));
  CHECK_THROWS_AS(run_group(env, agent, 10), DimensionError);
  Agent ok(3, 1, quick_agent(10));
  CHECK_THROWS_AS(run_group(env, ok, 0), ConfigError);
}

TEST_CASE("iterations_to_reach") {
  GroupTrace tr;
  for (std::size_t i = 1; i <= 5; ++i) tr.rows.push_back({i, static_cast<double>(i % 3), 0.0, -1, 0.0});
  CHECK(iterations_to_reach(tr, 2.0) == 2);
  CHECK(iterations_to_reach(tr, 0.5) == 1);
  CHECK(iterations_to_reach(tr, 2.5) == 6);
}

TEST_CASE("q = 1, two phases: the learned gain is the exhaustive optimum") {
  const auto& g = PhaseGrid::of(1);
  for (std::uint64_t s = 0; s < 10; ++s) {
    LearningTask task;
    task.users = random_users(1, 2, 100 + s);
    task.levels = LevelSpec({2});
    task.bits = 1;
    task.agent = quick_agent(64);
    task.seed = s;
    const auto res = learn_vector(task);
    std::mt19937_64 r(100 + s);
    const double best = oracle::brute_force_best({oracle::random_channel(2, r)}, 1);
    CHECK(res.gain == doctest::Approx(best).epsilon(1e-12));
    CHECK(res.gain == doctest::Approx(exhaustive_search(task.users, 2, g).mean_gain));
  }
}

TEST_CASE("learned vector is valid and its gain is recomputable") {
  LearningTask task;
  task.users = random_users(4, 12, 3);
  task.levels = LevelSpec({3, 2, 2});
  task.bits = 3;
  task.agent = quick_agent(40);
  task.seed = 11;
  const auto res = learn_vector(task);
  REQUIRE(res.vector.size() == 12);
  CHECK(res.vector.bits() == 3);
  for (PhaseIndex p : res.vector.indices()) CHECK(PhaseGrid::of(3).valid(p));
  CHECK(res.gain == mean_gain(task.users, res.vector));
  CHECK(res.vector == synthesize_phases(res.phases, task.levels, PhaseGrid::of(3)));
  // Groups per level: 4, 2, 1.
  CHECK(res.traces.size() == 7);
  CHECK(res.level_agents.size() == 3);
  for (const auto& tr : res.traces) {
    CHECK(tr.rows.size() == 40);
    CHECK(tr.transferred == (tr.group > 0));
  }
}

TEST_CASE("per-level budgets and transfer switch") {
  LearningTask task;
  task.users = random_users(2, 8, 5);
  task.levels = LevelSpec({4, 2});
  task.bits = 2;
  task.agent = quick_agent(50);
  task.level_budgets = {30, 20};
  task.transfer = false;
  const auto res = learn_vector(task);
  for (const auto& tr : res.traces) {
    CHECK(tr.rows.size() == (tr.level == 0 ? 30u : 20u));
    CHECK_FALSE(tr.transferred);
  }
  task.level_budgets = {30};
  CHECK_THROWS_AS(learn_vector(task), ConfigError);
}

TEST_CASE("learning task validation") {
  LearningTask task;
  task.levels = LevelSpec({4});
  task.bits = 2;
  task.agent = quick_agent(10);
  CHECK_THROWS_AS(learn_vector(task), DomainError);
  task.users = random_users(1, 6, 1);
  CHECK_THROWS_AS(learn_vector(task), ConfigError);
  task.users = random_users(1, 4, 1);
  task.users.push_back(random_users(1, 5, 2).front());
  CHECK_THROWS_AS(learn_vector(task), DimensionError);
}

TEST_CASE("learning is deterministic and independent of the thread count") {
  LearningTask task;
  task.users = random_users(3, 16, 9);
  task.levels = LevelSpec({4, 4});
  task.bits = 2;
  task.agent = quick_agent(60);
  task.seed = 21;
  const auto a = learn_vector(task);
  task.threads = 3;
  const auto b = learn_vector(task);
  CHECK(a.vector == b.vector);
  CHECK(a.gain == b.gain);
  REQUIRE(a.traces.size() == b.traces.size());
  for (std::size_t i = 0; i < a.traces.size(); ++i) {
    for (std::size_t t = 0; t < a.traces[i].rows.size(); ++t) {
      CHECK(a.traces[i].rows[t].gain == b.traces[i].rows[t].gain);
      CHECK(a.traces[i].rows[t].loss == b.traces[i].rows[t].loss);
    }
  }
  task.seed = 22;
  CHECK(learn_vector(task).traces[0].rows.back().gain != a.traces[0].rows.back().gain);
}

TEST_CASE("one level of M and two levels of M/2 x 2 both reach the aligned oracle") {
  const auto& g = PhaseGrid::of(2);
  const std::size_t m = 4;
  double flat = 0.0;
  double split = 0.0;
  const int seeds = 10;
  for (int s = 0; s < seeds; ++s) {
    std::mt19937_64 r(300 + s);
    const CompositeChannel c = plane_wave(m, r);
    const double aligned = gain(c, aligned_oracle(c, g));
    for (bool two : {false, true}) {
      LearningTask task;
      task.users = {c};
      task.levels = two ? LevelSpec({m / 2, 2}) : LevelSpec({m});
      task.bits = 2;
      task.agent = quick_agent(300);
      task.seed = static_cast<std::uint64_t>(s);
      const double ratio = learn_vector(task).gain / aligned;
      (two ? split : flat) += ratio / seeds;
    }
  }
  CHECK(flat >= 0.95);
  CHECK(split >= 0.95);
  CHECK(std::abs(flat - split) <= 0.05);
}
