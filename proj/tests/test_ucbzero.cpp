#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "ucblab/env_gen.hpp"
#include "ucblab/errors.hpp"
#include "ucblab/solver.hpp"
#include "ucblab/ucbzero.hpp"

using namespace ucblab;

namespace {

AlgoParams unit_params(std::size_t H, double iota) {
  AlgoParams p;
  p.episodes = 1;
  p.num_tasks = 1;
  p.bonus_scale = 1.0;
  p.horizon = H;
  p.iota = iota;
  return p;
}

}  // namespace

TEST_CASE("learning_rate examples") {
  CHECK(learning_rate(1, 7) == 1.0);
  CHECK(learning_rate(3, 2) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(learning_rate(9, 1) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK_THROWS_AS(learning_rate(0, 3), ParameterError);
}

TEST_CASE("bonus examples") {
  const auto p = unit_params(1, 1.0);
  CHECK(bonus(1, p) == 1.0);
  CHECK(bonus(4, p) == 0.5);
  CHECK_THROWS_AS(bonus(0, p), ParameterError);
}

TEST_CASE("bonus ratio between N = e N0 and N0 follows the log N term") {
  auto p = unit_params(3, 4.0);
  p.num_tasks = 7;
  const double base = bonus(5, p);
  p.num_tasks = 19;  // closest integer to e * 7
  const double ln_ratio = std::log(19.0 / 7.0);
  CHECK(bonus(5, p) / base ==
        doctest::Approx(std::sqrt((std::log(7.0) + ln_ratio + 4.0) / (std::log(7.0) + 4.0)))
            .epsilon(1e-12));
  CHECK(ln_ratio == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("AlgoParams::make derives iota = ln(SAHK/p) and validates") {
  const auto p = AlgoParams::make({5, 3, 5}, 1000, 10, 0.1, 0.5);
  CHECK(p.iota == doctest::Approx(std::log(5.0 * 3 * 5 * 1000 / 0.1)).epsilon(1e-15));
  CHECK(p.horizon == 5);
  CHECK_THROWS_AS(AlgoParams::make({5, 3, 5}, 0, 1, 0.1, 1.0), ParameterError);
  CHECK_THROWS_AS(AlgoParams::make({5, 3, 5}, 10, 0, 0.1, 1.0), ParameterError);
  CHECK_THROWS_AS(AlgoParams::make({5, 3, 5}, 10, 1, 1.0, 1.0), ParameterError);
  CHECK_THROWS_AS(AlgoParams::make({5, 3, 5}, 10, 1, 0.1, 0.0), ParameterError);
}

TEST_CASE("explore: S=1, A=1 records K x H copies of (0, 0, 0)") {
  const Shape sh{1, 1, 4};
  const auto mdp = gen_uniform_transition(1, 1, 4);
  const auto params = AlgoParams::make(sh, 25, 1, 0.1, 1.0);
  RngStream rng(1, "explore");
  const auto res = explore(mdp, params, rng);
  REQUIRE(res.dataset.num_episodes() == 25);
  for (const auto& t : res.dataset.steps()) CHECK(t == Transition{0, 0, 0});
  for (std::size_t h = 0; h < 4; ++h) CHECK(res.state.count(h, 0, 0) == 25);
}

TEST_CASE("explore: first update sets the pseudo-Q to V-bar(next) + 2 b_1") {
  RngStream fuzz(2, "first");
  const auto mdp = testing::fuzz_mdp(fuzz, 4, 3, 4);
  const auto params = AlgoParams::make(mdp.shape(), 200, 3, 0.1, 0.7);
  RngStream rng(3, "explore");
  const auto res = explore(mdp, params, rng);
  // Re-run the exact update rule from scratch on the recorded trajectory.
  LearnerState replay(mdp.shape(), LearnerMode::kExploration);
  for (std::size_t k = 0; k < res.dataset.num_episodes(); ++k)
    for (std::size_t h = 0; h < mdp.horizon(); ++h) {
      const auto& tr = res.dataset.at(k, h);
      const double v_next = replay.value(h + 1, tr.next_state);
      const std::size_t t = replay.update(h, tr.state, tr.action, tr.next_state, 0.0, params);
      if (t == 1) {
        CHECK(replay.q(h, tr.state, tr.action) == doctest::Approx(v_next + 2 * bonus(1, params)));
      }
    }
  const Shape sh = mdp.shape();
  for (std::size_t h = 0; h < sh.horizon; ++h)
    for (std::size_t s = 0; s < sh.states; ++s)
      for (std::size_t a = 0; a < sh.actions; ++a) {
        CHECK(replay.count(h, s, a) == res.state.count(h, s, a));
        CHECK(replay.q(h, s, a) == res.state.q(h, s, a));
      }
}

TEST_CASE("explore: pseudo-Q stays at least b_t at every visited cell") {
  RngStream fuzz(4, "optimism");
  for (int i = 0; i < 5; ++i) {
    const auto mdp = testing::fuzz_mdp(fuzz, 5, 3, 5);
    const auto params = AlgoParams::make(mdp.shape(), 300, 1, 0.1, 0.3);
    RngStream rng(5 + i, "explore");
    bool ok = true;
    explore(mdp, params, rng,
            [&](const LearnerState& st, std::size_t h, std::size_t s, std::size_t a,
                std::size_t t) {
              ok &= st.q(h, s, a) >= bonus(t, params) - 1e-12;
              for (std::size_t hh = 0; hh <= mdp.horizon(); ++hh)
                for (std::size_t ss = 0; ss < mdp.num_states(); ++ss) {
                  const double v = st.value(hh, ss);
                  ok &= v >= 0.0 && v <= static_cast<double>(mdp.horizon());
                }
            });
    CHECK(ok);
  }
}

TEST_CASE("explore: per-step counts sum to K and the dataset is well formed") {
  const auto mdp = gen_random_dense(5, 3, 5, 6);
  const auto params = AlgoParams::make(mdp.shape(), 500, 1, 0.1, 1.0);
  RngStream rng(7, "explore");
  const auto res = explore(mdp, params, rng);
  CHECK(validate_dataset(res.dataset).empty());
  const Shape sh = mdp.shape();
  for (std::size_t h = 0; h < sh.horizon; ++h) {
    std::size_t total = 0;
    for (std::size_t s = 0; s < sh.states; ++s)
      for (std::size_t a = 0; a < sh.actions; ++a) total += res.state.count(h, s, a);
    CHECK(total == 500);
  }
  CHECK(res.pseudo_value_trace.size() == 500);
  CHECK(res.pseudo_value_trace.front() == 5.0);
}

TEST_CASE("explore: same seed gives the same dataset") {
  const auto mdp = gen_random_dense(4, 3, 3, 8);
  const auto params = AlgoParams::make(mdp.shape(), 300, 1, 0.1, 1.0);
  RngStream a(1, "explore"), b(1, "explore");
  CHECK(explore(mdp, params, a).dataset == explore(mdp, params, b).dataset);
}

TEST_CASE("instantiate_rewards: deterministic family copies means") {
  const auto mdp = gen_random_dense(3, 2, 3, 9);
  const auto params = AlgoParams::make(mdp.shape(), 50, 1, 0.1, 1.0);
  RngStream rng(1, "explore");
  const auto res = explore(mdp, params, rng);
  RngStream fuzz(2, "means");
  std::vector<double> means(mdp.shape().cells());
  for (double& m : means) m = fuzz.uniform();
  const auto fam = RewardFamily::deterministic(mdp.shape(), means);
  RngStream rr(3, "reward");
  const auto aug = instantiate_rewards(res.dataset, fam, rr);
  for (std::size_t k = 0; k < 50; ++k)
    for (std::size_t h = 0; h < 3; ++h) {
      const auto& t = res.dataset.at(k, h);
      CHECK(aug.reward(k, h) == means[mdp.shape().cell(h, t.state, t.action)]);
    }
}

TEST_CASE("instantiate_rewards: state indicator pays exactly on visits") {
  const auto mdp = gen_random_dense(3, 2, 3, 10);
  const auto params = AlgoParams::make(mdp.shape(), 80, 1, 0.1, 1.0);
  RngStream rng(1, "explore");
  const auto res = explore(mdp, params, rng);
  const auto fam = RewardFamily::indicator(mdp.shape(), {1, 2, std::nullopt, std::nullopt});
  RngStream rr(3, "reward");
  const auto aug = instantiate_rewards(res.dataset, fam, rr);
  for (std::size_t k = 0; k < 80; ++k)
    for (std::size_t h = 0; h < 3; ++h)
      CHECK(aug.reward(k, h) == ((h == 1 && res.dataset.at(k, h).state == 2) ? 1.0 : 0.0));
}

TEST_CASE("instantiate_rewards: different streams change draws, not the dataset") {
  const auto mdp = gen_random_dense(3, 2, 3, 11);
  const auto params = AlgoParams::make(mdp.shape(), 100, 2, 0.1, 1.0);
  RngStream rng(1, "explore");
  const auto res = explore(mdp, params, rng);
  const auto fam = RewardFamily::bernoulli(mdp.shape(), std::vector<double>(18, 0.5));
  RngStream r0 = RngStream(1, "run").child("reward:task-0");
  RngStream r1 = RngStream(1, "run").child("reward:task-1");
  const auto a = instantiate_rewards(res.dataset, fam, r0);
  const auto b = instantiate_rewards(res.dataset, fam, r1);
  CHECK(a.data == b.data);
  CHECK(a.rewards != b.rewards);
}

TEST_CASE("policy_optimize: K=1 mixture is action 0 everywhere") {
  const auto mdp = gen_random_dense(4, 3, 3, 12);
  const auto params = AlgoParams::make(mdp.shape(), 1, 1, 0.1, 1.0);
  RngStream rng(1, "explore");
  const auto res = explore(mdp, params, rng);
  RngStream rr(2, "reward");
  const auto aug =
      instantiate_rewards(res.dataset, gen_random_bernoulli_task(mdp.shape(), 0.0, 1), rr);
  const auto opt = policy_optimize(aug, params);
  REQUIRE(opt.mixture.size() == 1);
  CHECK(opt.mixture.at(0) == DeterministicPolicy(mdp.shape()));
}

TEST_CASE("policy_optimize: single action mixture value equals that policy's value") {
  const Shape sh{1, 1, 3};
  const auto mdp = gen_uniform_transition(1, 1, 3);
  const auto fam = RewardFamily::bernoulli(sh, {0.2, 0.7, 0.4});
  const auto params = AlgoParams::make(sh, 40, 1, 0.1, 1.0);
  RngStream rng(1, "explore");
  const auto res = explore(mdp, params, rng);
  RngStream rr(2, "reward");
  const auto opt = policy_optimize(instantiate_rewards(res.dataset, fam, rr), params);
  CHECK(evaluate_mixture(mdp, fam, opt.mixture) ==
        doctest::Approx(evaluate_policy(mdp, fam, DeterministicPolicy(sh)).start_value()));
}

TEST_CASE("policy_optimize is a pure function of its inputs") {
  const auto mdp = gen_random_dense(4, 3, 4, 13);
  const auto params = AlgoParams::make(mdp.shape(), 400, 1, 0.1, 0.5);
  RngStream rng(1, "explore");
  const auto res = explore(mdp, params, rng);
  RngStream rr(2, "reward");
  const auto aug =
      instantiate_rewards(res.dataset, gen_random_bernoulli_task(mdp.shape(), 0.0, 4), rr);
  const auto a = policy_optimize(aug, params);
  const auto b = policy_optimize(aug, params);
  CHECK(a.mixture == b.mixture);
  CHECK(a.start_values == b.start_values);
  // Replay visits the same cells as exploration.
  CHECK(a.state.counts() == res.state.counts());
}

TEST_CASE("policy_optimize: mismatched sizes are shape errors") {
  const auto mdp = gen_random_dense(3, 2, 3, 14);
  const auto params = AlgoParams::make(mdp.shape(), 10, 1, 0.1, 1.0);
  RngStream rng(1, "explore");
  const auto res = explore(mdp, params, rng);
  RngStream rr(2, "reward");
  auto aug = instantiate_rewards(res.dataset, RewardFamily::zero(mdp.shape()), rr);
  CHECK_THROWS_AS(policy_optimize(aug, AlgoParams::make(mdp.shape(), 11, 1, 0.1, 1.0)),
                  ShapeError);
  CHECK_THROWS_AS(policy_optimize(aug, AlgoParams::make({3, 2, 4}, 10, 1, 0.1, 1.0)), ShapeError);
  aug.rewards.pop_back();
  CHECK_THROWS_AS(policy_optimize(aug, params), ShapeError);
}

TEST_CASE("run_task_agnostic: N=1 equals explore followed by one policy_optimize") {
  const auto mdp = gen_random_dense(4, 3, 4, 15);
  const auto task = gen_random_bernoulli_task(mdp.shape(), 0.0, 2);
  const auto params = AlgoParams::make(mdp.shape(), 300, 1, 0.1, 0.5);
  const RngStream root(3, "run");
  const auto all = run_task_agnostic(mdp, {task}, params, root);

  RngStream env = root.child("explore");
  const auto res = explore(mdp, params, env);
  RngStream rr = root.child("reward:task-0");
  const auto opt = policy_optimize(instantiate_rewards(res.dataset, task, rr), params);
  CHECK(all.exploration.dataset == res.dataset);
  CHECK(all.tasks[0].mixture == opt.mixture);
  CHECK(all.tasks[0].gap ==
        optimal_values(mdp, task).values.start_value() - evaluate_mixture(mdp, task, opt.mixture));
}

TEST_CASE("run_task_agnostic: identical deterministic tasks give identical mixtures") {
  const auto mdp = gen_random_dense(4, 3, 3, 16);
  std::vector<double> means(mdp.shape().cells());
  RngStream fuzz(1, "means");
  for (double& m : means) m = fuzz.uniform();
  const auto fam = RewardFamily::deterministic(mdp.shape(), means);
  const auto params = AlgoParams::make(mdp.shape(), 200, 4, 0.1, 1.0);
  const auto res = run_task_agnostic(mdp, {fam, fam, fam, fam}, params, RngStream(2, "run"), 2);
  for (std::size_t n = 1; n < 4; ++n) CHECK(res.tasks[n].mixture == res.tasks[0].mixture);
  for (const auto& t : res.tasks) CHECK(t.gap >= -1e-9);
}

TEST_CASE("run_task_agnostic: worker count does not change results") {
  const auto mdp = gen_random_dense(4, 3, 3, 17);
  const auto tasks = gen_random_bernoulli_tasks(mdp.shape(), 5, 0.0, 3);
  const auto params = AlgoParams::make(mdp.shape(), 150, 5, 0.1, 1.0);
  const auto a = run_task_agnostic(mdp, tasks, params, RngStream(4, "run"), 1);
  const auto b = run_task_agnostic(mdp, tasks, params, RngStream(4, "run"), 3);
  for (std::size_t n = 0; n < 5; ++n) CHECK(a.tasks[n].mixture == b.tasks[n].mixture);
  CHECK_THROWS_AS(run_task_agnostic(mdp, {tasks[0]}, params, RngStream(4, "run")), ParameterError);
}
