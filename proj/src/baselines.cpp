#include "ucblab/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ucblab/errors.hpp"
#include "ucblab/parallel.hpp"

namespace ucblab {

UcbHResult ucb_h(const TabularMdp& mdp, const RewardFamily& family, const AlgoParams& params,
                 RngStream& env_rng, RngStream& reward_rng, const UcbHOptions& options) {
  const Shape& sh = mdp.shape();
  if (params.horizon != sh.horizon || !(family.shape() == sh)) {
    throw ShapeError("ucb_h: MDP, reward family and params disagree on shape");
  }
  const std::size_t H = sh.horizon;
  const double cap = static_cast<double>(H);
  std::vector<double> q(sh.cells(), cap);
  std::vector<std::size_t> n(sh.cells(), 0);

  auto argmax = [&](std::size_t h, std::size_t s) {
    std::size_t best = 0;
    for (std::size_t a = 1; a < sh.actions; ++a) {
      if (q[sh.cell(h, s, a)] > q[sh.cell(h, s, best)]) best = a;
    }
    return best;
  };
  auto v = [&](std::size_t h, std::size_t s) {
    return h == H ? 0.0 : std::min(cap, q[sh.cell(h, s, argmax(h, s))]);
  };

  UcbHResult out{ExplorationDataset(sh), {}, {}, {}};
  out.trajectory.reserve(params.episodes);
  out.rewards.reserve(params.episodes * H);

  std::vector<double> means;
  double optimal = 0.0;
  if (options.track_regret) {
    means = mean_reward_table(family, mdp);
    optimal = optimal_values(mdp, means).values.start_value();
    out.regret.reserve(params.episodes);
  }
  std::vector<double> scratch;
  double current_value = 0.0;
  double cumulative = 0.0;

  for (std::size_t k = 0; k < params.episodes; ++k) {
    std::vector<std::uint32_t> table(H * sh.states);
    for (std::size_t h = 0; h < H; ++h)
      for (std::size_t s = 0; s < sh.states; ++s)
        table[h * sh.states + s] = static_cast<std::uint32_t>(argmax(h, s));
    DeterministicPolicy policy(sh, std::move(table));
    const bool changed = out.policies.empty() || !(out.policies.runs().back().policy == policy);
    if (options.track_regret) {
      if (changed) current_value = policy_start_value(mdp, means, policy, scratch);
      cumulative += optimal - current_value;
      out.regret.push_back(cumulative);
    }
    out.policies.append(policy);

    std::size_t s = TabularMdp::kStartState;
    for (std::size_t h = 0; h < H; ++h) {
      const std::size_t a = argmax(h, s);
      const std::size_t next = sample_transition(mdp, h, s, a, env_rng);
      const double observed = sample_reward(family, h, s, a, next, reward_rng);
      const double r = options.zero_rewards ? 0.0 : observed;
      const std::size_t cell = sh.cell(h, s, a);
      const std::size_t t = ++n[cell];
      const double alpha = learning_rate(t, H);
      const double b = options.bonus_multiplier * bonus(t, params);
      q[cell] = (1.0 - alpha) * q[cell] + alpha * (r + v(h + 1, next) + b);
      out.trajectory.push({static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(a),
                           static_cast<std::uint32_t>(next)});
      out.rewards.push_back(r);
      s = next;
    }
  }
  return out;
}

EmpiricalModel build_empirical_model(const ExplorationDataset& data,
                                     const std::vector<double>* rewards) {
  const Shape& sh = data.shape();
  if (rewards && rewards->size() != data.steps().size()) {
    throw ShapeError("build_empirical_model: reward count does not match the dataset");
  }
  const std::size_t S = sh.states;
  EmpiricalModel m{sh,
                   std::vector<std::size_t>(sh.cells(), 0),
                   std::vector<std::size_t>(sh.cells() * S, 0),
                   std::vector<double>(sh.cells() * S, 0.0),
                   std::vector<double>(sh.cells(), 0.0)};
  std::vector<double> reward_sums(sh.cells(), 0.0);
  for (std::size_t i = 0; i < data.steps().size(); ++i) {
    const Transition& t = data.steps()[i];
    const std::size_t cell = sh.cell(i % sh.horizon, t.state, t.action);
    ++m.visits[cell];
    ++m.transition_counts[cell * S + t.next_state];
    if (rewards) reward_sums[cell] += (*rewards)[i];
  }
  for (std::size_t cell = 0; cell < sh.cells(); ++cell) {
    double* row = m.transitions.data() + cell * S;
    if (m.visits[cell] == 0) {
      std::fill(row, row + S, 1.0 / static_cast<double>(S));
      continue;
    }
    const double n = static_cast<double>(m.visits[cell]);
    for (std::size_t next = 0; next < S; ++next) {
      row[next] = static_cast<double>(m.transition_counts[cell * S + next]) / n;
    }
    m.mean_rewards[cell] = reward_sums[cell] / n;
  }
  return m;
}

DeterministicPolicy tce_plan(const EmpiricalModel& model) {
  return optimal_values(model.transition_model(), model.mean_rewards).policy;
}

std::vector<double> naive_multitask(const TabularMdp& mdp,
                                    const std::vector<RewardFamily>& families,
                                    std::size_t total_episodes, double failure_prob,
                                    double bonus_scale, const RngStream& rng,
                                    std::size_t workers) {
  if (families.empty()) throw ParameterError("naive_multitask: no tasks");
  const std::size_t per_task = total_episodes / families.size();
  if (per_task == 0) {
    throw ParameterError("naive_multitask: budget " + std::to_string(total_episodes) +
                         " is smaller than the task count");
  }
  const AlgoParams params =
      AlgoParams::make(mdp.shape(), per_task, 1, failure_prob, bonus_scale);
  std::vector<double> gaps(families.size());
  parallel_for(families.size(), workers, [&](std::size_t n) {
    const RngStream task_rng = rng.child("naive:task-" + std::to_string(n));
    RngStream env_rng = task_rng.child("env");
    RngStream reward_rng = task_rng.child("reward");
    UcbHOptions options;
    options.track_regret = false;
    const auto run = ucb_h(mdp, families[n], params, env_rng, reward_rng, options);
    const auto means = mean_reward_table(families[n], mdp);
    gaps[n] = optimal_values(mdp, means).values.start_value() -
              evaluate_mixture(mdp, means, run.policies);
  });
  return gaps;
}

}  // namespace ucblab
