#pragma once

#include <optional>
#include <vector>

#include "ucblab/mdp.hpp"
#include "ucblab/rng.hpp"

namespace ucblab {

enum class RewardKind { kDeterministicTable, kBernoulliTable, kNextStateIndicator };

/// Pays 1 on transitions matching (step, state[, action][, next_state]).
struct IndicatorSpec {
  std::size_t step = 0;
  std::size_t state = 0;
  std::optional<std::size_t> action;
  std::optional<std::size_t> next_state;
};

/// One task's stochastic reward kernel r_h(. | s, a, s') with support in
/// [0, 1]. Table kinds ignore s'.
class RewardFamily {
 public:
  static RewardFamily deterministic(Shape shape, std::vector<double> means);
  static RewardFamily bernoulli(Shape shape, std::vector<double> means);
  static RewardFamily indicator(Shape shape, IndicatorSpec spec);
  /// Deterministic all-zero table.
  static RewardFamily zero(Shape shape);

  RewardKind kind() const { return kind_; }
  const Shape& shape() const { return shape_; }

  /// Table means indexed by Shape::cell; empty for indicator kinds.
  const std::vector<double>& table_means() const { return means_; }
  const IndicatorSpec& indicator_spec() const { return spec_; }

  bool matches(std::size_t h, std::size_t s, std::size_t a, std::size_t next) const;

 private:
  RewardFamily(RewardKind kind, Shape shape, std::vector<double> means, IndicatorSpec spec);

  RewardKind kind_;
  Shape shape_;
  std::vector<double> means_;
  IndicatorSpec spec_;
};

double sample_reward(const RewardFamily& family, std::size_t h, std::size_t s, std::size_t a,
                     std::size_t next, RngStream& rng);

/// E[r_h(s, a)]; for indicator kinds this marginalizes over P_h(. | s, a).
double mean_reward(const RewardFamily& family, const TabularMdp& mdp, std::size_t h,
                   std::size_t s, std::size_t a);

/// mean_reward over every cell, indexed by Shape::cell.
std::vector<double> mean_reward_table(const RewardFamily& family, const TabularMdp& mdp);

}  // namespace ucblab
