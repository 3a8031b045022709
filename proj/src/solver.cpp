#include "ucblab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ucblab/errors.hpp"

namespace ucblab {

DeterministicPolicy::DeterministicPolicy(Shape shape)
    : shape_(shape), actions_(shape.horizon * shape.states, 0) {}

DeterministicPolicy::DeterministicPolicy(Shape shape, std::vector<std::uint32_t> actions)
    : shape_(shape), actions_(std::move(actions)) {
  if (actions_.size() != shape_.horizon * shape_.states) {
    throw ShapeError("DeterministicPolicy: table size does not match " + to_string(shape_));
  }
  for (auto a : actions_) {
    if (a >= shape_.actions) throw std::out_of_range("DeterministicPolicy: action out of range");
  }
}

void DeterministicPolicy::set_action(std::size_t h, std::size_t s, std::size_t a) {
  shape_.check(h, s, a);
  actions_[h * shape_.states + s] = static_cast<std::uint32_t>(a);
}

void MixturePolicy::append(const DeterministicPolicy& policy) {
  if (!runs_.empty()) {
    if (!(runs_.front().policy.shape() == policy.shape())) {
      throw ShapeError("MixturePolicy: component shapes differ");
    }
    if (runs_.back().policy == policy) {
      ++runs_.back().count;
      ++total_;
      return;
    }
  }
  runs_.push_back({policy, 1});
  ++total_;
}

const DeterministicPolicy& MixturePolicy::at(std::size_t k) const {
  for (const Run& r : runs_) {
    if (k < r.count) return r.policy;
    k -= r.count;
  }
  throw std::out_of_range("MixturePolicy::at: index past the end");
}

bool operator==(const MixturePolicy::Run& a, const MixturePolicy::Run& b) {
  return a.count == b.count && a.policy == b.policy;
}

bool operator==(const MixturePolicy& a, const MixturePolicy& b) {
  return a.total_ == b.total_ && a.runs_ == b.runs_;
}

namespace {

void require_shape(const TabularMdp& mdp, const std::vector<double>& means) {
  if (means.size() != mdp.shape().cells()) {
    throw ShapeError("mean reward table does not match " + to_string(mdp.shape()));
  }
}

// E[r] + [P_h V_{h+1}](s, a) with V_{h+1} given by next_v.
double backup(const TabularMdp& mdp, const std::vector<double>& means, std::size_t h,
              std::size_t s, std::size_t a, const double* next_v) {
  const Shape& sh = mdp.shape();
  const std::size_t cell = sh.cell(h, s, a);
  const double* row = mdp.transitions().data() + cell * sh.states;
  double total = 0.0;
  for (std::size_t next = 0; next < sh.states; ++next) total += row[next] * next_v[next];
  return means[cell] + total;
}

}  // namespace

OptimalSolution optimal_values(const TabularMdp& mdp, const std::vector<double>& means) {
  require_shape(mdp, means);
  const Shape& sh = mdp.shape();
  OptimalSolution out{ValueTables(sh), DeterministicPolicy(sh)};
  ValueTables& vt = out.values;
  for (std::size_t h = sh.horizon; h-- > 0;) {
    const double* next_v = vt.v.data() + (h + 1) * sh.states;
    for (std::size_t s = 0; s < sh.states; ++s) {
      std::size_t best = 0;
      for (std::size_t a = 0; a < sh.actions; ++a) {
        const double q = backup(mdp, means, h, s, a, next_v);
        vt.q[sh.cell(h, s, a)] = q;
        if (q > vt.q[sh.cell(h, s, best)]) best = a;
      }
      vt.v[h * sh.states + s] = vt.q[sh.cell(h, s, best)];
      out.policy.set_action(h, s, best);
    }
  }
  return out;
}

OptimalSolution optimal_values(const TabularMdp& mdp, const RewardFamily& family) {
  return optimal_values(mdp, mean_reward_table(family, mdp));
}

ValueTables evaluate_policy(const TabularMdp& mdp, const std::vector<double>& means,
                            const DeterministicPolicy& policy) {
  require_shape(mdp, means);
  const Shape& sh = mdp.shape();
  if (!(policy.shape() == sh)) throw ShapeError("evaluate_policy: policy shape mismatch");
  ValueTables vt(sh);
  for (std::size_t h = sh.horizon; h-- > 0;) {
    const double* next_v = vt.v.data() + (h + 1) * sh.states;
    for (std::size_t s = 0; s < sh.states; ++s) {
      for (std::size_t a = 0; a < sh.actions; ++a) {
        vt.q[sh.cell(h, s, a)] = backup(mdp, means, h, s, a, next_v);
      }
      vt.v[h * sh.states + s] = vt.q[sh.cell(h, s, policy.action(h, s))];
    }
  }
  return vt;
}

ValueTables evaluate_policy(const TabularMdp& mdp, const RewardFamily& family,
                            const DeterministicPolicy& policy) {
  return evaluate_policy(mdp, mean_reward_table(family, mdp), policy);
}

double policy_start_value(const TabularMdp& mdp, const std::vector<double>& means,
                          const DeterministicPolicy& policy, std::vector<double>& scratch) {
  const Shape& sh = mdp.shape();
  scratch.assign(2 * sh.states, 0.0);
  double* next_v = scratch.data();
  double* cur_v = scratch.data() + sh.states;
  for (std::size_t h = sh.horizon; h-- > 0;) {
    // Only s_1 matters at the first step.
    const std::size_t n_states = h == 0 ? 1 : sh.states;
    for (std::size_t s = 0; s < n_states; ++s) {
      cur_v[s] = backup(mdp, means, h, s, policy.action(h, s), next_v);
    }
    std::swap(next_v, cur_v);
  }
  return next_v[TabularMdp::kStartState];
}

double evaluate_mixture(const TabularMdp& mdp, const std::vector<double>& means,
                        const MixturePolicy& mix) {
  if (mix.empty()) throw ParameterError("evaluate_mixture: empty mixture");
  require_shape(mdp, means);
  std::vector<double> scratch;
  double total = 0.0;
  for (const auto& run : mix.runs()) {
    total += static_cast<double>(run.count) * policy_start_value(mdp, means, run.policy, scratch);
  }
  return total / static_cast<double>(mix.size());
}

double evaluate_mixture(const TabularMdp& mdp, const RewardFamily& family,
                        const MixturePolicy& mix) {
  return evaluate_mixture(mdp, mean_reward_table(family, mdp), mix);
}

std::vector<double> reachability_to_target(const TabularMdp& mdp, std::size_t target_step,
                                           std::size_t target_state) {
  const Shape& sh = mdp.shape();
  if (target_step >= sh.horizon) {
    throw ParameterError("reachability_to_target: step " + std::to_string(target_step + 1) +
                         " outside [1, H]");
  }
  sh.check_state(target_state);
  std::vector<double> delta((target_step + 1) * sh.states, 0.0);
  delta[target_step * sh.states + target_state] = 1.0;
  for (std::size_t h = target_step; h-- > 0;) {
    const double* next = delta.data() + (h + 1) * sh.states;
    for (std::size_t s = 0; s < sh.states; ++s) {
      double best = 0.0;
      for (std::size_t a = 0; a < sh.actions; ++a) {
        const auto row = mdp.row(h, s, a);
        double total = 0.0;
        for (std::size_t n = 0; n < sh.states; ++n) total += row[n] * next[n];
        best = std::max(best, total);
      }
      delta[h * sh.states + s] = std::min(1.0, best);
    }
  }
  return delta;
}

std::vector<double> all_reachabilities(const TabularMdp& mdp) {
  const Shape& sh = mdp.shape();
  std::vector<double> delta(sh.horizon * sh.states, 0.0);
  for (std::size_t h = 0; h < sh.horizon; ++h) {
    for (std::size_t s = 0; s < sh.states; ++s) {
      delta[h * sh.states + s] = reachability_to_target(mdp, h, s)[TabularMdp::kStartState];
    }
  }
  return delta;
}

double brute_force_optimal(const TabularMdp& mdp, const RewardFamily& family) {
  const Shape& sh = mdp.shape();
  const std::size_t slots = sh.states * sh.horizon;
  double count = std::pow(static_cast<double>(sh.actions), static_cast<double>(slots));
  if (count > 1e6) {
    throw SizeError("brute_force_optimal: A^(S*H) = " + std::to_string(count) +
                    " exceeds 10^6");
  }
  const auto means = mean_reward_table(family, mdp);
  std::vector<std::uint32_t> digits(slots, 0);
  std::vector<double> scratch;
  double best = -1.0;
  // Odometer over the base-A digits of the policy table.
  while (true) {
    DeterministicPolicy policy(sh, digits);
    best = std::max(best, evaluate_policy(mdp, means, policy).start_value());
    std::size_t i = 0;
    while (i < slots && ++digits[i] == sh.actions) digits[i++] = 0;
    if (i == slots) break;
  }
  return best;
}

}  // namespace ucblab
