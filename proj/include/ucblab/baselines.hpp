#pragma once

#include <vector>

#include "ucblab/dataset.hpp"
#include "ucblab/solver.hpp"
#include "ucblab/ucbzero.hpp"

namespace ucblab {

struct UcbHOptions {
  /// Ignore observed rewards (treated as 0). Reward draws still happen on
  /// the reward stream, so the transition stream is unaffected.
  bool zero_rewards = false;
  /// Multiplies b_t; 2 reproduces the exploration-phase pseudo-Q update.
  double bonus_multiplier = 1.0;
  /// Evaluate every episode's policy exactly to fill the regret trace.
  bool track_regret = true;
};

struct UcbHResult {
  ExplorationDataset trajectory;
  std::vector<double> rewards;
  /// Greedy policy at the start of each episode.
  MixturePolicy policies;
  /// Cumulative sum over episodes of V*_1(s_1) - V^{pi_k}_1(s_1).
  std::vector<double> regret;
};

/// Online optimistic Q-learning with Hoeffding bonuses for params.episodes
/// episodes. Transitions come from env_rng, rewards from reward_rng.
UcbHResult ucb_h(const TabularMdp& mdp, const RewardFamily& family, const AlgoParams& params,
                 RngStream& env_rng, RngStream& reward_rng, const UcbHOptions& options = {});

/// Count-based model. Unseen (h, s, a) rows fall back to the uniform
/// distribution and zero reward.
struct EmpiricalModel {
  Shape shape;
  std::vector<std::size_t> visits;             // n(h,s,a), by Shape::cell
  std::vector<std::size_t> transition_counts;  // n(h,s,a,s')
  std::vector<double> transitions;             // P-hat, row-major (h,s,a,s')
  std::vector<double> mean_rewards;            // r-hat, by Shape::cell

  TabularMdp transition_model() const { return TabularMdp(shape, transitions); }
};

EmpiricalModel build_empirical_model(const ExplorationDataset& data,
                                     const std::vector<double>* rewards = nullptr);

/// Certainty-equivalence planning: optimal greedy policy of (P-hat, r-hat).
DeterministicPolicy tce_plan(const EmpiricalModel& model);

/// Splits K_total evenly (floor) across the tasks and runs UCB-H on each
/// with its own budget and N = 1. Returns each task's mixture gap.
/// ParameterError when K_total < number of tasks.
std::vector<double> naive_multitask(const TabularMdp& mdp,
                                    const std::vector<RewardFamily>& families,
                                    std::size_t total_episodes, double failure_prob,
                                    double bonus_scale, const RngStream& rng,
                                    std::size_t workers = 1);

}  // namespace ucblab
