#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ucblab/mdp.hpp"
#include "ucblab/reward.hpp"

namespace ucblab {

/// Time-dependent deterministic policy: (h, s) -> action.
class DeterministicPolicy {
 public:
  /// All-zero policy.
  explicit DeterministicPolicy(Shape shape);
  DeterministicPolicy(Shape shape, std::vector<std::uint32_t> actions);

  const Shape& shape() const { return shape_; }
  std::size_t action(std::size_t h, std::size_t s) const {
    return actions_[h * shape_.states + s];
  }
  void set_action(std::size_t h, std::size_t s, std::size_t a);
  const std::vector<std::uint32_t>& actions() const { return actions_; }

  friend bool operator==(const DeterministicPolicy&, const DeterministicPolicy&) = default;

 private:
  Shape shape_;
  std::vector<std::uint32_t> actions_;
};

/// V over steps 0..H (V at index H is identically zero) and Q over steps 0..H-1.
struct ValueTables {
  Shape shape;
  std::vector<double> v;
  std::vector<double> q;

  explicit ValueTables(Shape s)
      : shape(s), v((s.horizon + 1) * s.states, 0.0), q(s.cells(), 0.0) {}

  double V(std::size_t h, std::size_t s) const { return v[h * shape.states + s]; }
  double Q(std::size_t h, std::size_t s, std::size_t a) const { return q[shape.cell(h, s, a)]; }
  double start_value() const { return v[TabularMdp::kStartState]; }
};

/// Uniform mixture over an ordered list of K deterministic policies, stored
/// run-length encoded: consecutive equal policies share one entry.
class MixturePolicy {
 public:
  struct Run {
    DeterministicPolicy policy;
    std::size_t count;
  };

  void append(const DeterministicPolicy& policy);

  std::size_t size() const { return total_; }
  bool empty() const { return total_ == 0; }
  const std::vector<Run>& runs() const { return runs_; }

  /// The k-th component (0-based), expanding the run-length encoding.
  const DeterministicPolicy& at(std::size_t k) const;

  friend bool operator==(const MixturePolicy&, const MixturePolicy&);

 private:
  std::vector<Run> runs_;
  std::size_t total_ = 0;
};

bool operator==(const MixturePolicy::Run& a, const MixturePolicy::Run& b);

struct OptimalSolution {
  ValueTables values;
  DeterministicPolicy policy;
};

/// Backward induction. Greedy ties go to the lowest action index.
OptimalSolution optimal_values(const TabularMdp& mdp, const RewardFamily& family);
OptimalSolution optimal_values(const TabularMdp& mdp, const std::vector<double>& mean_rewards);

ValueTables evaluate_policy(const TabularMdp& mdp, const RewardFamily& family,
                            const DeterministicPolicy& policy);
ValueTables evaluate_policy(const TabularMdp& mdp, const std::vector<double>& mean_rewards,
                            const DeterministicPolicy& policy);

/// V^pi_1(s_1) only; scratch must have at least 2*S entries and is reused
/// across calls to avoid allocation in tight loops.
double policy_start_value(const TabularMdp& mdp, const std::vector<double>& mean_rewards,
                          const DeterministicPolicy& policy, std::vector<double>& scratch);

/// (1/K) sum_k V^{pi_k}_1(s_1). Throws ParameterError on an empty mixture.
double evaluate_mixture(const TabularMdp& mdp, const RewardFamily& family,
                        const MixturePolicy& mix);
double evaluate_mixture(const TabularMdp& mdp, const std::vector<double>& mean_rewards,
                        const MixturePolicy& mix);

/// delta_{h, target_step}(s, target_state) for h = 0..target_step, stored
/// as [h * S + s]: the maximum over policies of the probability of being in
/// target_state at target_step when at s on step h.
std::vector<double> reachability_to_target(const TabularMdp& mdp, std::size_t target_step,
                                           std::size_t target_state);

/// delta_h(s) = delta_{1,h}(s_1, s) for every (h, s), stored as [h * S + s].
std::vector<double> all_reachabilities(const TabularMdp& mdp);

/// Maximum of V^pi_1(s_1) over all A^(S*H) deterministic policies.
/// Throws SizeError when A^(S*H) exceeds 10^6.
double brute_force_optimal(const TabularMdp& mdp, const RewardFamily& family);

}  // namespace ucblab
