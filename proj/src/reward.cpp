#include "ucblab/reward.hpp"

#include <cmath>
#include <string>

#include "ucblab/errors.hpp"

namespace ucblab {

namespace {

void check_means(const Shape& shape, const std::vector<double>& means) {
  if (means.size() != shape.cells()) {
    throw ShapeError("RewardFamily: " + std::to_string(means.size()) +
                     " means for " + to_string(shape));
  }
  for (double m : means) {
    if (!(m >= 0.0 && m <= 1.0)) {
      throw ParameterError("RewardFamily: mean " + std::to_string(m) + " outside [0,1]");
    }
  }
}

}  // namespace

RewardFamily::RewardFamily(RewardKind kind, Shape shape, std::vector<double> means,
                           IndicatorSpec spec)
    : kind_(kind), shape_(shape), means_(std::move(means)), spec_(spec) {}

RewardFamily RewardFamily::deterministic(Shape shape, std::vector<double> means) {
  check_means(shape, means);
  return RewardFamily(RewardKind::kDeterministicTable, shape, std::move(means), {});
}

RewardFamily RewardFamily::bernoulli(Shape shape, std::vector<double> means) {
  check_means(shape, means);
  return RewardFamily(RewardKind::kBernoulliTable, shape, std::move(means), {});
}

RewardFamily RewardFamily::indicator(Shape shape, IndicatorSpec spec) {
  shape.check(spec.step, spec.state, spec.action.value_or(0));
  if (spec.next_state) shape.check_state(*spec.next_state);
  return RewardFamily(RewardKind::kNextStateIndicator, shape, {}, spec);
}

RewardFamily RewardFamily::zero(Shape shape) {
  return deterministic(shape, std::vector<double>(shape.cells(), 0.0));
}

bool RewardFamily::matches(std::size_t h, std::size_t s, std::size_t a, std::size_t next) const {
  return h == spec_.step && s == spec_.state && (!spec_.action || *spec_.action == a) &&
         (!spec_.next_state || *spec_.next_state == next);
}

double sample_reward(const RewardFamily& family, std::size_t h, std::size_t s, std::size_t a,
                     std::size_t next, RngStream& rng) {
  const Shape& sh = family.shape();
  sh.check(h, s, a);
  sh.check_state(next);
  switch (family.kind()) {
    case RewardKind::kDeterministicTable:
      return family.table_means()[sh.cell(h, s, a)];
    case RewardKind::kBernoulliTable:
      return rng.bernoulli(family.table_means()[sh.cell(h, s, a)]) ? 1.0 : 0.0;
    case RewardKind::kNextStateIndicator:
      return family.matches(h, s, a, next) ? 1.0 : 0.0;
  }
  return 0.0;
}

double mean_reward(const RewardFamily& family, const TabularMdp& mdp, std::size_t h,
                   std::size_t s, std::size_t a) {
  const Shape& sh = family.shape();
  if (!(sh == mdp.shape())) {
    throw ShapeError("mean_reward: family " + to_string(sh) + " vs MDP " +
                     to_string(mdp.shape()));
  }
  sh.check(h, s, a);
  if (family.kind() != RewardKind::kNextStateIndicator) {
    return family.table_means()[sh.cell(h, s, a)];
  }
  const auto row = mdp.row(h, s, a);
  double total = 0.0;
  for (std::size_t next = 0; next < row.size(); ++next) {
    if (family.matches(h, s, a, next)) total += row[next];
  }
  return total;
}

std::vector<double> mean_reward_table(const RewardFamily& family, const TabularMdp& mdp) {
  const Shape& sh = mdp.shape();
  if (family.kind() != RewardKind::kNextStateIndicator && family.shape() == sh) {
    return family.table_means();
  }
  std::vector<double> table(sh.cells());
  for (std::size_t h = 0; h < sh.horizon; ++h)
    for (std::size_t s = 0; s < sh.states; ++s)
      for (std::size_t a = 0; a < sh.actions; ++a)
        table[sh.cell(h, s, a)] = mean_reward(family, mdp, h, s, a);
  return table;
}

}  // namespace ucblab
