#include "ucblab/ucbzero.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ucblab/errors.hpp"
#include "ucblab/parallel.hpp"

namespace ucblab {

AlgoParams AlgoParams::make(Shape shape, std::size_t episodes, std::size_t num_tasks,
                            double failure_prob, double bonus_scale) {
  if (shape.states == 0 || shape.actions == 0 || shape.horizon == 0) {
    throw ParameterError("AlgoParams: sizes must be positive");
  }
  if (episodes == 0) throw ParameterError("AlgoParams: K must be >= 1");
  if (num_tasks == 0) throw ParameterError("AlgoParams: N must be >= 1");
  if (!(failure_prob > 0.0 && failure_prob < 1.0)) {
    throw ParameterError("AlgoParams: p must lie in (0, 1)");
  }
  if (!(bonus_scale > 0.0) || !std::isfinite(bonus_scale)) {
    throw ParameterError("AlgoParams: c must be positive");
  }
  AlgoParams p;
  p.episodes = episodes;
  p.num_tasks = num_tasks;
  p.failure_prob = failure_prob;
  p.bonus_scale = bonus_scale;
  p.horizon = shape.horizon;
  p.iota = std::log(static_cast<double>(shape.states) * static_cast<double>(shape.actions) *
                    static_cast<double>(shape.horizon) * static_cast<double>(episodes) /
                    failure_prob);
  return p;
}

double learning_rate(std::size_t t, std::size_t horizon) {
  if (t < 1) throw ParameterError("learning_rate: t must be >= 1");
  const double H = static_cast<double>(horizon);
  return (H + 1.0) / (H + static_cast<double>(t));
}

double bonus(std::size_t t, const AlgoParams& params) {
  if (t < 1) throw ParameterError("bonus: t must be >= 1");
  const double H = static_cast<double>(params.horizon);
  const double log_n = std::log(static_cast<double>(params.num_tasks));
  return params.bonus_scale * std::sqrt(H * H * H * (log_n + params.iota) / static_cast<double>(t));
}

LearnerState::LearnerState(Shape shape, LearnerMode mode)
    : shape_(shape),
      mode_(mode),
      q_(shape.cells(), static_cast<double>(shape.horizon)),
      counts_(shape.cells(), 0) {}

std::size_t LearnerState::greedy_action(std::size_t h, std::size_t s) const {
  const double* row = q_.data() + shape_.cell(h, s, 0);
  return static_cast<std::size_t>(std::max_element(row, row + shape_.actions) - row);
}

double LearnerState::value(std::size_t h, std::size_t s) const {
  if (h == shape_.horizon) return 0.0;
  return std::min(static_cast<double>(shape_.horizon), q(h, s, greedy_action(h, s)));
}

DeterministicPolicy LearnerState::greedy_policy() const {
  std::vector<std::uint32_t> actions(shape_.horizon * shape_.states);
  for (std::size_t h = 0; h < shape_.horizon; ++h)
    for (std::size_t s = 0; s < shape_.states; ++s)
      actions[h * shape_.states + s] = static_cast<std::uint32_t>(greedy_action(h, s));
  return DeterministicPolicy(shape_, std::move(actions));
}

std::size_t LearnerState::update(std::size_t h, std::size_t s, std::size_t a, std::size_t next,
                                 double reward, const AlgoParams& params) {
  const std::size_t cell = shape_.cell(h, s, a);
  const std::size_t t = ++counts_[cell];
  const double alpha = learning_rate(t, shape_.horizon);
  const double multiplier = mode_ == LearnerMode::kExploration ? 2.0 : 1.0;
  const double target = reward + value(h + 1, next) + multiplier * bonus(t, params);
  q_[cell] = (1.0 - alpha) * q_[cell] + alpha * target;
  return t;
}

ExploreResult explore(const TabularMdp& mdp, const AlgoParams& params, RngStream& env_rng,
                      const ExploreObserver& observer) {
  const Shape& sh = mdp.shape();
  if (params.horizon != sh.horizon) {
    throw ShapeError("explore: params horizon does not match the MDP");
  }
  ExploreResult out{ExplorationDataset(sh), LearnerState(sh, LearnerMode::kExploration), {}};
  out.dataset.reserve(params.episodes);
  out.pseudo_value_trace.reserve(params.episodes);
  LearnerState& learner = out.state;
  for (std::size_t k = 0; k < params.episodes; ++k) {
    std::size_t s = TabularMdp::kStartState;
    out.pseudo_value_trace.push_back(learner.value(0, s));
    for (std::size_t h = 0; h < sh.horizon; ++h) {
      const std::size_t a = learner.greedy_action(h, s);
      const std::size_t next = sample_transition(mdp, h, s, a, env_rng);
      const std::size_t t = learner.update(h, s, a, next, 0.0, params);
      if (observer) observer(learner, h, s, a, t);
      out.dataset.push({static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(a),
                        static_cast<std::uint32_t>(next)});
      s = next;
    }
  }
  return out;
}

RewardAugmentedDataset instantiate_rewards(const ExplorationDataset& data,
                                           const RewardFamily& family, RngStream& rng) {
  if (!(family.shape() == data.shape())) {
    throw ShapeError("instantiate_rewards: family " + to_string(family.shape()) +
                     " vs dataset " + to_string(data.shape()));
  }
  RewardAugmentedDataset aug{data, {}};
  aug.rewards.reserve(data.steps().size());
  const std::size_t H = data.shape().horizon;
  for (std::size_t i = 0; i < data.steps().size(); ++i) {
    const Transition& t = data.steps()[i];
    aug.rewards.push_back(sample_reward(family, i % H, t.state, t.action, t.next_state, rng));
  }
  return aug;
}

PolicyOptResult policy_optimize(const RewardAugmentedDataset& aug, const AlgoParams& params) {
  const Shape& sh = aug.data.shape();
  const std::size_t K = aug.data.num_episodes();
  if (params.horizon != sh.horizon) {
    throw ShapeError("policy_optimize: params horizon " + std::to_string(params.horizon) +
                     " vs dataset H=" + std::to_string(sh.horizon));
  }
  if (params.episodes != K) {
    throw ShapeError("policy_optimize: params K=" + std::to_string(params.episodes) +
                     " vs dataset K=" + std::to_string(K));
  }
  if (aug.rewards.size() != aug.data.steps().size()) {
    throw ShapeError("policy_optimize: reward count does not match the dataset");
  }
  PolicyOptResult out{{}, {}, LearnerState(sh, LearnerMode::kPolicyOptimization)};
  out.start_values.reserve(K);
  LearnerState& learner = out.state;
  for (std::size_t k = 0; k < K; ++k) {
    out.mixture.append(learner.greedy_policy());
    out.start_values.push_back(learner.value(0, TabularMdp::kStartState));
    for (std::size_t h = 0; h < sh.horizon; ++h) {
      const Transition& t = aug.data.at(k, h);
      learner.update(h, t.state, t.action, t.next_state, aug.reward(k, h), params);
    }
  }
  return out;
}

double TaskAgnosticResult::max_gap() const {
  double best = 0.0;
  for (const auto& t : tasks) best = std::max(best, t.gap);
  return best;
}

double TaskAgnosticResult::mean_gap() const {
  if (tasks.empty()) return 0.0;
  double total = 0.0;
  for (const auto& t : tasks) total += t.gap;
  return total / static_cast<double>(tasks.size());
}

TaskAgnosticResult run_task_agnostic(const TabularMdp& mdp,
                                     const std::vector<RewardFamily>& families,
                                     const AlgoParams& params, const RngStream& rng,
                                     std::size_t workers) {
  if (families.empty()) throw ParameterError("run_task_agnostic: no tasks");
  if (params.num_tasks != families.size()) {
    throw ParameterError("run_task_agnostic: params.N=" + std::to_string(params.num_tasks) +
                         " but " + std::to_string(families.size()) + " families given");
  }
  RngStream env_rng = rng.child("explore");
  TaskAgnosticResult out{explore(mdp, params, env_rng), {}};
  out.tasks.resize(families.size());
  parallel_for(families.size(), workers, [&](std::size_t n) {
    RngStream reward_rng = rng.child("reward:task-" + std::to_string(n));
    const auto aug = instantiate_rewards(out.exploration.dataset, families[n], reward_rng);
    auto opt = policy_optimize(aug, params);
    const auto means = mean_reward_table(families[n], mdp);
    TaskOutcome& task = out.tasks[n];
    task.optimal_value = optimal_values(mdp, means).values.start_value();
    task.mixture_value = evaluate_mixture(mdp, means, opt.mixture);
    task.gap = task.optimal_value - task.mixture_value;
    task.mixture = std::move(opt.mixture);
  });
  return out;
}

}  // namespace ucblab
