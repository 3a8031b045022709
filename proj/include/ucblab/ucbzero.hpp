#pragma once

#include <functional>
#include <vector>

#include "ucblab/dataset.hpp"
#include "ucblab/mdp.hpp"
#include "ucblab/reward.hpp"
#include "ucblab/rng.hpp"
#include "ucblab/solver.hpp"

namespace ucblab {

/// Hyper-parameters shared by both phases.
///
/// iota = ln(S A H K / p) is fixed once K is known, so there is no anytime
/// variant: K must be chosen before exploration starts.
struct AlgoParams {
  std::size_t episodes = 0;     // K
  std::size_t num_tasks = 1;    // N
  double failure_prob = 0.1;    // p
  double bonus_scale = 1.0;     // c
  std::size_t horizon = 0;      // H
  double iota = 0.0;

  /// Validates the inputs (K, N >= 1, p in (0, 1), c > 0) and derives iota.
  static AlgoParams make(Shape shape, std::size_t episodes, std::size_t num_tasks,
                         double failure_prob, double bonus_scale);
};

/// alpha_t = (H + 1) / (H + t); ParameterError for t < 1.
double learning_rate(std::size_t t, std::size_t horizon);

/// b_t = c sqrt(H^3 (ln N + iota) / t); ParameterError for t < 1.
double bonus(std::size_t t, const AlgoParams& params);

enum class LearnerMode {
  kExploration,         // pseudo-Q: no reward, bonus 2 b_t
  kPolicyOptimization,  // reward + b_t
};

/// Optimistic Q table with visit counts. Q starts at H and counts at 0.
class LearnerState {
 public:
  LearnerState(Shape shape, LearnerMode mode);

  const Shape& shape() const { return shape_; }
  LearnerMode mode() const { return mode_; }

  double q(std::size_t h, std::size_t s, std::size_t a) const { return q_[shape_.cell(h, s, a)]; }
  std::size_t count(std::size_t h, std::size_t s, std::size_t a) const {
    return counts_[shape_.cell(h, s, a)];
  }
  const std::vector<std::size_t>& counts() const { return counts_; }

  /// argmax_a Q_h(s, a), lowest index on ties.
  std::size_t greedy_action(std::size_t h, std::size_t s) const;

  /// min(H, max_a Q_h(s, a)); zero at h == H.
  double value(std::size_t h, std::size_t s) const;

  DeterministicPolicy greedy_policy() const;

  /// One optimistic Q-learning step on (h, s, a) -> next with the given
  /// reward (must be 0 in exploration mode). Increments the count to t and
  /// applies Q <- (1 - alpha_t) Q + alpha_t [r + V_{h+1}(next) + m b_t]
  /// with m = 2 when exploring and 1 otherwise. Returns t.
  std::size_t update(std::size_t h, std::size_t s, std::size_t a, std::size_t next,
                     double reward, const AlgoParams& params);

 private:
  Shape shape_;
  LearnerMode mode_;
  std::vector<double> q_;
  std::vector<std::size_t> counts_;
};

struct ExploreResult {
  ExplorationDataset dataset;
  LearnerState state;
  /// V-bar^k_1(s_1) at the start of each episode.
  std::vector<double> pseudo_value_trace;
};

/// Called after every exploration update with (state, h, s, a, t).
using ExploreObserver = std::function<void(const LearnerState&, std::size_t, std::size_t,
                                           std::size_t, std::size_t)>;

/// Reward-free exploration for params.episodes episodes. Transitions are
/// drawn from `env_rng` only; no reward is ever read.
ExploreResult explore(const TabularMdp& mdp, const AlgoParams& params, RngStream& env_rng,
                      const ExploreObserver& observer = {});

/// Samples r_h^k at every recorded (h, s, a, s') from `rng`.
RewardAugmentedDataset instantiate_rewards(const ExplorationDataset& data,
                                           const RewardFamily& family, RngStream& rng);

struct PolicyOptResult {
  /// pi_1..pi_K, where pi_k is greedy w.r.t. Q before episode k's updates.
  MixturePolicy mixture;
  /// V_1^k(s_1) = min(H, max_a Q_1(s_1, a)) at the top of episode k.
  std::vector<double> start_values;
  LearnerState state;
};

/// Replays the augmented dataset in episode order with fresh counts and the
/// single bonus b_t. Pure in (aug, params). ShapeError if params.horizon,
/// params.episodes or the reward vector disagree with the dataset.
PolicyOptResult policy_optimize(const RewardAugmentedDataset& aug, const AlgoParams& params);

struct TaskOutcome {
  MixturePolicy mixture;
  double optimal_value = 0.0;
  double mixture_value = 0.0;
  double gap = 0.0;
};

struct TaskAgnosticResult {
  ExploreResult exploration;
  std::vector<TaskOutcome> tasks;

  double max_gap() const;
  double mean_gap() const;
};

/// One exploration run followed by per-task reward instantiation and policy
/// optimization. Streams: "<rng>/explore" for transitions and
/// "<rng>/reward:task-<n>" for task n's rewards. Requires
/// params.num_tasks == families.size(). Tasks run on up to `workers` threads.
TaskAgnosticResult run_task_agnostic(const TabularMdp& mdp,
                                     const std::vector<RewardFamily>& families,
                                     const AlgoParams& params, const RngStream& rng,
                                     std::size_t workers = 1);

}  // namespace ucblab
