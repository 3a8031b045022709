#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ucblab/rng.hpp"

namespace ucblab {

/// Sizes shared by every tabular object. Steps are indexed 0..H-1 in code;
/// files and reports print them 1-based.
struct Shape {
  std::size_t states = 0;
  std::size_t actions = 0;
  std::size_t horizon = 0;

  friend bool operator==(const Shape&, const Shape&) = default;

  std::size_t cells() const { return horizon * states * actions; }
  std::size_t cell(std::size_t h, std::size_t s, std::size_t a) const {
    return (h * states + s) * actions + a;
  }
  void check(std::size_t h, std::size_t s, std::size_t a) const;
  void check_state(std::size_t s) const;
};

std::string to_string(const Shape& shape);

/// Finite-horizon episodic MDP with time-dependent transitions and a fixed
/// start state (index 0). Probabilities are stored row-major in
/// (h, s, a, s') order.
class TabularMdp {
 public:
  static constexpr std::size_t kStartState = 0;

  /// Throws ShapeError if any size is zero or the tensor length is not
  /// H*S*A*S. Stochasticity is not enforced here; see validate_mdp.
  TabularMdp(Shape shape, std::vector<double> transitions);

  const Shape& shape() const { return shape_; }
  std::size_t num_states() const { return shape_.states; }
  std::size_t num_actions() const { return shape_.actions; }
  std::size_t horizon() const { return shape_.horizon; }

  std::span<const double> row(std::size_t h, std::size_t s, std::size_t a) const;
  double prob(std::size_t h, std::size_t s, std::size_t a, std::size_t next) const;
  const std::vector<double>& transitions() const { return transitions_; }

 private:
  Shape shape_;
  std::vector<double> transitions_;
};

/// Empty iff every row is non-negative and sums to 1 within 1e-9.
std::vector<std::string> validate_mdp(const TabularMdp& mdp);

std::size_t sample_transition(const TabularMdp& mdp, std::size_t h, std::size_t s,
                              std::size_t a, RngStream& rng);

/// Plain-text format:
///
///   ucblab-mdp 1
///   S A H start_state
///   one line per (h, s, a) holding the S next-state probabilities
///
/// Rows are in (h, s, a) row-major order; values are printed with 17
/// significant digits so parsing reproduces the doubles exactly.
void write_mdp(std::ostream& out, const TabularMdp& mdp);
TabularMdp read_mdp(std::istream& in);

}  // namespace ucblab
