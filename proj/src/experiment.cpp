#include "ucblab/experiment.hpp"

#include "ucblab/baselines.hpp"

namespace ucblab {

ExperimentPoint default_point(const ExperimentConfig& cfg) {
  return {cfg.tasks.count, cfg.algo.episodes, cfg.algo.bonus_scale, cfg.seed};
}

std::uint64_t environment_seed(const ExperimentConfig& cfg, std::uint64_t seed) {
  return cfg.source.count("env.seed") ? cfg.env.seed : seed;
}

ExperimentSetup build_experiment(const ExperimentConfig& cfg, const ExperimentPoint& point) {
  EnvSpec spec = cfg.env;
  spec.seed = environment_seed(cfg, point.seed);
  Environment env = make_environment(spec);
  const Shape shape = env.mdp.shape();

  std::vector<RewardFamily> tasks;
  if (cfg.tasks.kind == "random-bernoulli") {
    tasks = gen_random_bernoulli_tasks(shape, point.num_tasks, cfg.tasks.sparsity, point.seed);
  } else if (cfg.tasks.kind == "default") {
    tasks.assign(point.num_tasks, env.default_task);
  } else {
    tasks = gen_hard_task_family(shape.states, shape.actions, shape.horizon, cfg.env.epsilon,
                                 point.num_tasks, point.seed)
                .tasks;
  }
  const AlgoParams params = AlgoParams::make(shape, point.episodes, point.num_tasks,
                                             cfg.algo.failure_prob, point.bonus_scale);
  return {std::move(env), std::move(tasks), params};
}

RngStream run_stream(std::uint64_t seed) { return RngStream(seed, "run"); }

RngStream naive_stream(std::uint64_t seed) { return RngStream(seed, "naive"); }

ExperimentOutcome run_experiment(const ExperimentConfig& cfg, const ExperimentPoint& point,
                                 bool with_naive, std::size_t workers) {
  const ExperimentSetup setup = build_experiment(cfg, point);
  ExperimentOutcome out{point,
                        run_task_agnostic(setup.env.mdp, setup.tasks, setup.params,
                                          run_stream(point.seed), workers),
                        std::nullopt};
  if (with_naive) {
    out.naive_gaps = naive_multitask(setup.env.mdp, setup.tasks, point.episodes,
                                     cfg.algo.failure_prob, point.bonus_scale,
                                     naive_stream(point.seed), workers);
  }
  return out;
}

}  // namespace ucblab
