#pragma once

#include <cstdint>
#include <vector>

#include "ucblab/rng.hpp"

namespace ucblab {

/// Two-armed construction behind the log N lower bound. Reward family p pays
/// 0.1 on arm 1 and 0 on arm 2, both deterministically; each of the N - 1
/// q families pays 0.1 on arm 1 and Bernoulli(0.5) on arm 2. Arms are
/// 1-based here to match the construction's naming.
struct TwoArmConstruction {
  std::size_t episodes;  // K
  std::size_t num_tasks; // N = ceil(1 + 2^K ln 2)
  double p_arm1 = 0.1;
  double p_arm2 = 0.0;
  double q_arm1 = 0.1;
  double q_arm2_mean = 0.5;

  std::size_t best_arm_under_p() const { return p_arm1 >= p_arm2 ? 1 : 2; }
  std::size_t best_arm_under_q() const { return q_arm2_mean > q_arm1 ? 2 : 1; }
};

/// ParameterError if K is so large that N does not fit in 64 bits.
TwoArmConstruction make_two_arm_construction(std::size_t episodes);

/// 1 - (1 - 0.5^T2)^(N-1): the chance that at least one of the N - 1
/// Bernoulli(0.5) reward strings of length T2 is all zeros.
double collision_probability_analytic(std::size_t pulls, std::uint64_t num_tasks);

struct MonteCarloEstimate {
  double estimate;
  double std_error;  // sqrt(p (1 - p) / trials) at the estimate
  std::size_t trials;
};

/// Direct simulation of the collision event.
MonteCarloEstimate collision_probability_mc(std::size_t pulls, std::uint64_t num_tasks,
                                            std::size_t trials, RngStream& rng);

struct MinimaxGap {
  double gap_under_q;  // 0.4 x
  double gap_under_p;  // 0.1 - 0.1 x
  double worst;
};

/// x is the learned policy's probability of pulling arm 1.
MinimaxGap minimax_gap(double x);

struct MinimaxSearch {
  double best_x;
  double best_worst_gap;
};

/// Scans x over {0, step, 2 step, ..., 1}; the first minimiser wins ties.
MinimaxSearch minimax_gap_grid_search(std::size_t steps = 1000);

/// H_0..H_n for an (n + 1)-armed Bernoulli bandit: H_0 has arm 0 at
/// (1 + eps) / 2 and the rest at 1/2; H_l additionally raises arm l to
/// 1/2 + eps. Requires n >= 2 and 0 < eps <= 1/8.
std::vector<std::vector<double>> hypothesis_family(std::size_t n_arms, double epsilon);

/// (1 / (c eps^2)) ln(N / (8 delta)) for eps in (0, 1/8), delta in
/// (0, e^-4 / 8), N >= 1 and c > 0.
double t_star(double epsilon, double delta, double num_tasks, double c_lb);

struct HardnessOptions {
  std::size_t n_arms = 4;  // hypothesis_family(n_arms) has n_arms + 1 arms
  double epsilon = 0.1;
  std::vector<std::size_t> task_counts{1, 8, 64};
  std::vector<std::uint64_t> seeds{1, 2, 3};
  std::vector<std::size_t> budgets;  // total pulls, ascending
  std::size_t trials = 200;
  double success_level = 0.9;
  double failure_prob = 0.1;  // exploration parameters
  double bonus_scale = 1.0;
};

struct HardnessRow {
  std::size_t num_tasks;
  std::uint64_t seed;
  std::size_t budget;
  double success_fraction;
};

struct HardnessThreshold {
  std::size_t num_tasks;
  /// Per seed: smallest budget reaching success_level, 0 if none does.
  std::vector<std::size_t> budget_per_seed;
  /// Median over seeds, with "never" counted as larger than any budget;
  /// 0 if the median run never reaches the level.
  std::size_t median_budget;
};

struct HardnessSweep {
  std::vector<HardnessRow> rows;
  std::vector<HardnessThreshold> thresholds;
};

/// Task-agnostic best-arm identification on hypothesis_family instances.
/// Each run draws a hypothesis per task uniformly from H_0..H_n, spends the
/// budget on reward-free UCB exploration of the single-state, single-step
/// bandit (see arm_pull_counts), instantiates independent Bernoulli rewards
/// for every task and recommends each task's empirical best arm (lowest
/// index on ties; unpulled arms score 0). A run succeeds when every task's
/// recommendation is its best arm.
HardnessSweep empirical_hardness_sweep(const HardnessOptions& options);

/// Pull counts after `budget` episodes of reward-free optimistic exploration
/// on an A-armed bandit (S = 1, H = 1).
std::vector<std::size_t> arm_pull_counts(std::size_t arms, std::size_t budget,
                                         double failure_prob, double bonus_scale);

}  // namespace ucblab
