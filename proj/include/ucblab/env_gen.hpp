#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ucblab/mdp.hpp"
#include "ucblab/reward.hpp"

namespace ucblab {

/// Every row drawn from a symmetric Dirichlet(1).
TabularMdp gen_random_dense(std::size_t S, std::size_t A, std::size_t H, std::uint64_t seed);

/// P_h(s'|s,a) = 1/S everywhere: actions do not influence the next state.
TabularMdp gen_uniform_transition(std::size_t S, std::size_t A, std::size_t H);

/// Two-action chain. Action 0 moves right with probability 1 - slip and
/// otherwise stays; action 1 does the same leftwards. The ends are absorbing
/// for moves that would leave the chain. The seed is accepted for interface
/// uniformity; the layout is deterministic.
TabularMdp gen_chain(std::size_t S, std::size_t H, double slip, std::uint64_t seed);

/// Width x height grid, row-major cells, actions {up, down, left, right}.
/// The intended move succeeds with probability 1 - slip (blocked moves stay
/// in place); with probability slip the agent lands on a uniformly chosen
/// in-grid neighbour instead.
TabularMdp gen_gridworld(std::size_t width, std::size_t height, std::size_t H, double slip,
                         std::uint64_t seed);

/// Per-task Bernoulli bandits replicated at every (h, s).
struct HardTaskFamily {
  std::vector<RewardFamily> tasks;
  /// hidden_arm[n][h * S + s] is the action with mean 1/2 + epsilon.
  std::vector<std::vector<std::size_t>> hidden_arm;
};

/// Arm 0 has mean (1 + epsilon) / 2, one hidden arm drawn uniformly from
/// {1..A-1} per (task, h, s) has mean 1/2 + epsilon, and all others 1/2.
/// Requires A >= 3 and 0 < epsilon <= 1/8.
HardTaskFamily gen_hard_task_family(std::size_t S, std::size_t A, std::size_t H,
                                    double epsilon, std::size_t num_tasks, std::uint64_t seed);

/// Bernoulli task with means drawn uniformly from [0, 1]; each cell is
/// zeroed with probability `sparsity`.
RewardFamily gen_random_bernoulli_task(Shape shape, double sparsity, std::uint64_t seed);

/// N independent random Bernoulli tasks; task n draws from stream
/// "task/random-bernoulli:<n>" of `seed`, so the first tasks of a larger set
/// coincide with a smaller set under the same seed.
std::vector<RewardFamily> gen_random_bernoulli_tasks(Shape shape, std::size_t num_tasks,
                                                     double sparsity, std::uint64_t seed);

struct EnvSpec {
  std::string generator = "random-dense";  // random-dense|chain|gridworld|uniform-transition-bandit
  std::size_t states = 5;
  std::size_t actions = 3;
  std::size_t horizon = 5;
  std::size_t grid_width = 3;
  std::size_t grid_height = 3;
  double slip = 0.1;
  double reward_sparsity = 0.0;
  double epsilon = 0.1;  // uniform-transition-bandit only
  std::uint64_t seed = 0;
};

struct Environment {
  TabularMdp mdp;
  RewardFamily default_task;
};

/// Builds the MDP named by spec.generator together with its default task:
/// random-dense -> random Bernoulli means; chain -> reward 1 at the right
/// end; gridworld -> reward 1 in the far corner; uniform-transition-bandit
/// -> one hard task family member. Throws ParameterError on an unknown
/// generator or invalid knobs.
Environment make_environment(const EnvSpec& spec);

}  // namespace ucblab
