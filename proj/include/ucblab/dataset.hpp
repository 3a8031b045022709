#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ucblab/mdp.hpp"
#include "ucblab/reward.hpp"

namespace ucblab {

struct Transition {
  std::uint32_t state = 0;
  std::uint32_t action = 0;
  std::uint32_t next_state = 0;

  friend bool operator==(const Transition&, const Transition&) = default;
};

/// K episodes of H transitions each, stored episode-major.
class ExplorationDataset {
 public:
  explicit ExplorationDataset(Shape shape) : shape_(shape) {}

  const Shape& shape() const { return shape_; }
  std::size_t num_episodes() const { return steps_.size() / shape_.horizon; }

  /// Appends one step; episodes are completed every H appends.
  void push(const Transition& t) { steps_.push_back(t); }
  void reserve(std::size_t episodes) { steps_.reserve(episodes * shape_.horizon); }

  const Transition& at(std::size_t k, std::size_t h) const {
    return steps_[k * shape_.horizon + h];
  }
  const std::vector<Transition>& steps() const { return steps_; }

  friend bool operator==(const ExplorationDataset&, const ExplorationDataset&) = default;

 private:
  Shape shape_;
  std::vector<Transition> steps_;
};

/// Empty iff the dataset holds whole episodes that start at state 0, chain
/// next_state into the following step's state, and stay within the shape.
std::vector<std::string> validate_dataset(const ExplorationDataset& data);

struct RewardAugmentedDataset {
  ExplorationDataset data;
  std::vector<double> rewards;  // parallel to data.steps()

  double reward(std::size_t k, std::size_t h) const {
    return rewards[k * data.shape().horizon + h];
  }
};

/// Run metadata carried in dataset file headers.
struct DatasetHeader {
  Shape shape;
  std::size_t episodes = 0;
  std::uint64_t seed = 0;
  double bonus_scale = 1.0;
  double failure_prob = 0.1;
  std::size_t num_tasks = 1;
};

/// CSV layout:
///
///   # ucblab-dataset format_version=1 S=.. A=.. H=.. K=.. seed=.. c=.. p=.. N=..
///   k,h,s,a,s_next[,r]
///   1,1,0,2,3[,0.5]
///
/// k and h are 1-based. Rewards are written with 17 significant digits.
void write_dataset_csv(std::ostream& out, const DatasetHeader& header,
                       const ExplorationDataset& data,
                       const std::vector<double>* rewards = nullptr);

struct LoadedDataset {
  DatasetHeader header;
  ExplorationDataset data;
  std::optional<std::vector<double>> rewards;
};

/// Throws FormatError on malformed input and ShapeError when the rows
/// disagree with the header.
LoadedDataset read_dataset_csv(std::istream& in);

}  // namespace ucblab
