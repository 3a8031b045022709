#include "ucblab/bandit_lb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ucblab/env_gen.hpp"
#include "ucblab/errors.hpp"
#include "ucblab/ucbzero.hpp"

namespace ucblab {

TwoArmConstruction make_two_arm_construction(std::size_t episodes) {
  if (episodes > 60) throw ParameterError("two-arm construction: K must be <= 60");
  const double n = std::ceil(1.0 + std::ldexp(1.0, static_cast<int>(episodes)) * std::log(2.0));
  TwoArmConstruction c{};
  c.episodes = episodes;
  c.num_tasks = static_cast<std::size_t>(n);
  return c;
}

double collision_probability_analytic(std::size_t pulls, std::uint64_t num_tasks) {
  if (num_tasks < 2) throw ParameterError("collision probability: need N >= 2");
  const double match = std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(pulls, 2000)));
  if (match >= 1.0) return 1.0;
  return -std::expm1(static_cast<double>(num_tasks - 1) * std::log1p(-match));
}

MonteCarloEstimate collision_probability_mc(std::size_t pulls, std::uint64_t num_tasks,
                                            std::size_t trials, RngStream& rng) {
  if (trials == 0) throw ParameterError("collision_probability_mc: trials must be >= 1");
  if (num_tasks < 2) throw ParameterError("collision_probability_mc: need N >= 2");
  std::size_t hits = 0;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    bool collided = false;
    for (std::uint64_t q = 0; q + 1 < num_tasks && !collided; ++q) {
      // Draw the string 64 fair bits at a time; all-zero means it matches p.
      bool all_zero = true;
      for (std::size_t done = 0; done < pulls && all_zero; done += 64) {
        const std::size_t bits = std::min<std::size_t>(64, pulls - done);
        const std::uint64_t word = rng.next_u64();
        const std::uint64_t mask = bits == 64 ? ~0ULL : ((1ULL << bits) - 1);
        all_zero = (word & mask) == 0;
      }
      collided = all_zero;
    }
    hits += collided ? 1 : 0;
  }
  const double est = static_cast<double>(hits) / static_cast<double>(trials);
  return {est, std::sqrt(est * (1.0 - est) / static_cast<double>(trials)), trials};
}

MinimaxGap minimax_gap(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw ParameterError("minimax_gap: x must lie in [0, 1]");
  const double q = 0.4 * x;
  const double p = 0.1 - 0.1 * x;
  return {q, p, std::max(q, p)};
}

MinimaxSearch minimax_gap_grid_search(std::size_t steps) {
  if (steps == 0) throw ParameterError("minimax_gap_grid_search: steps must be >= 1");
  MinimaxSearch best{0.0, std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i <= steps; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(steps);
    const double worst = minimax_gap(x).worst;
    if (worst < best.best_worst_gap) best = {x, worst};
  }
  return best;
}

std::vector<std::vector<double>> hypothesis_family(std::size_t n_arms, double epsilon) {
  if (n_arms < 2) throw ParameterError("hypothesis_family: need n >= 2");
  if (!(epsilon > 0.0 && epsilon <= 0.125)) {
    throw ParameterError("hypothesis_family: epsilon must lie in (0, 1/8]");
  }
  std::vector<double> base(n_arms + 1, 0.5);
  base[0] = (1.0 + epsilon) / 2.0;
  std::vector<std::vector<double>> out{base};
  for (std::size_t l = 1; l <= n_arms; ++l) {
    auto h = base;
    h[l] = 0.5 + epsilon;
    out.push_back(std::move(h));
  }
  return out;
}

double t_star(double epsilon, double delta, double num_tasks, double c_lb) {
  if (!(epsilon > 0.0 && epsilon < 0.125)) throw ParameterError("t_star: epsilon outside (0, 1/8)");
  if (!(delta > 0.0 && delta < std::exp(-4.0) / 8.0)) {
    throw ParameterError("t_star: delta outside (0, e^-4/8)");
  }
  if (!(num_tasks >= 1.0)) throw ParameterError("t_star: N must be >= 1");
  if (!(c_lb > 0.0)) throw ParameterError("t_star: c must be positive");
  return std::log(num_tasks / (8.0 * delta)) / (c_lb * epsilon * epsilon);
}

std::vector<std::size_t> arm_pull_counts(std::size_t arms, std::size_t budget,
                                         double failure_prob, double bonus_scale) {
  if (budget == 0) return std::vector<std::size_t>(arms, 0);
  const Shape shape{1, arms, 1};
  const auto mdp = gen_uniform_transition(1, arms, 1);
  const auto params = AlgoParams::make(shape, budget, 1, failure_prob, bonus_scale);
  RngStream unused(0, "bandit/explore");  // single-state transitions consume no randomness
  const auto run = explore(mdp, params, unused);
  return run.state.counts();
}

HardnessSweep empirical_hardness_sweep(const HardnessOptions& options) {
  if (options.task_counts.empty() || options.seeds.empty() || options.budgets.empty()) {
    throw ParameterError("empirical_hardness_sweep: grids must be non-empty");
  }
  if (!std::is_sorted(options.budgets.begin(), options.budgets.end())) {
    throw ParameterError("empirical_hardness_sweep: budgets must be ascending");
  }
  if (options.trials == 0) throw ParameterError("empirical_hardness_sweep: trials must be >= 1");
  const auto hypotheses = hypothesis_family(options.n_arms, options.epsilon);
  const std::size_t arms = options.n_arms + 1;
  std::vector<std::vector<std::size_t>> pulls;
  for (std::size_t b : options.budgets) {
    pulls.push_back(arm_pull_counts(arms, b, options.failure_prob, options.bonus_scale));
  }

  HardnessSweep out;
  for (std::size_t n : options.task_counts) {
    if (n == 0) throw ParameterError("empirical_hardness_sweep: N must be >= 1");
    HardnessThreshold threshold{n, {}, 0};
    for (std::uint64_t seed : options.seeds) {
      std::size_t reached = 0;
      for (std::size_t bi = 0; bi < options.budgets.size(); ++bi) {
        RngStream rng(seed, "hardness/N=" + std::to_string(n) +
                                "/budget=" + std::to_string(options.budgets[bi]));
        std::size_t successes = 0;
        std::vector<double> score(arms);
        for (std::size_t trial = 0; trial < options.trials; ++trial) {
          bool all_correct = true;
          for (std::size_t task = 0; task < n; ++task) {
            const std::size_t hyp = rng.uniform_index(hypotheses.size());
            const auto& means = hypotheses[hyp];
            for (std::size_t a = 0; a < arms; ++a) {
              const std::size_t m = pulls[bi][a];
              score[a] = m == 0 ? 0.0
                                : static_cast<double>(rng.binomial(m, means[a])) /
                                      static_cast<double>(m);
            }
            const std::size_t pick = static_cast<std::size_t>(
                std::max_element(score.begin(), score.end()) - score.begin());
            // H_0's best arm is 0; H_l's is l.
            if (pick != hyp) all_correct = false;
          }
          successes += all_correct ? 1 : 0;
        }
        const double fraction =
            static_cast<double>(successes) / static_cast<double>(options.trials);
        out.rows.push_back({n, seed, options.budgets[bi], fraction});
        if (reached == 0 && fraction >= options.success_level) reached = options.budgets[bi];
      }
      threshold.budget_per_seed.push_back(reached);
    }
    std::vector<double> as_values;
    for (std::size_t b : threshold.budget_per_seed) {
      as_values.push_back(b == 0 ? std::numeric_limits<double>::infinity()
                                 : static_cast<double>(b));
    }
    std::sort(as_values.begin(), as_values.end());
    // Lower median keeps the value on the budget grid.
    const double med = as_values[(as_values.size() - 1) / 2];
    threshold.median_budget = std::isfinite(med) ? static_cast<std::size_t>(med) : 0;
    out.thresholds.push_back(std::move(threshold));
  }
  return out;
}

}  // namespace ucblab
