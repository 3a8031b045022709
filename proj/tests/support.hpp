#pragma once

#include <cmath>
#include <vector>

#include "ucblab/mdp.hpp"
#include "ucblab/reward.hpp"
#include "ucblab/rng.hpp"

namespace testing {

// Random sizes within the given bounds, Dirichlet-ish rows with some exact zeros.
inline ucblab::TabularMdp fuzz_mdp(ucblab::RngStream& rng, std::size_t max_s, std::size_t max_a,
                                   std::size_t max_h) {
  const ucblab::Shape shape{1 + rng.uniform_index(max_s), 1 + rng.uniform_index(max_a),
                            1 + rng.uniform_index(max_h)};
  std::vector<double> p(shape.cells() * shape.states);
  for (std::size_t row = 0; row < shape.cells(); ++row) {
    double total = 0.0;
    for (std::size_t n = 0; n < shape.states; ++n) {
      double& x = p[row * shape.states + n];
      x = rng.uniform() < 0.2 ? 0.0 : rng.exponential();
      total += x;
    }
    if (total == 0.0) {
      p[row * shape.states] = 1.0;
      total = 1.0;
    }
    for (std::size_t n = 0; n < shape.states; ++n) p[row * shape.states + n] /= total;
  }
  return ucblab::TabularMdp(shape, std::move(p));
}

inline ucblab::RewardFamily fuzz_rewards(ucblab::RngStream& rng, ucblab::Shape shape) {
  std::vector<double> means(shape.cells());
  for (double& m : means) m = rng.uniform();
  return rng.bernoulli(0.5) ? ucblab::RewardFamily::bernoulli(shape, means)
                            : ucblab::RewardFamily::deterministic(shape, means);
}

// Three binomial standard deviations around p for n draws.
inline double three_sigma(double p, double n) { return 3.0 * std::sqrt(p * (1.0 - p) / n); }

}  // namespace testing
