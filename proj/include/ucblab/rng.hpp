#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>

namespace ucblab {

/// Seeded random stream identified by (root seed, label).
///
/// The engine is std::mt19937_64 seeded through SplitMix64 from the root seed
/// and an FNV-1a hash of the label, so two streams with the same pair replay
/// the same draws and streams with different labels are decorrelated.
/// All derived draws (uniform, categorical, Bernoulli) are computed here from
/// raw 64-bit outputs rather than through std:: distributions, whose output
/// is implementation-defined.
class RngStream {
 public:
  RngStream(std::uint64_t root_seed, std::string_view label);

  /// Stream labelled "<label>/<sub>" under the same root seed.
  RngStream child(std::string_view sub) const;

  std::uint64_t root_seed() const { return root_seed_; }
  const std::string& label() const { return label_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  /// Uniform integer in [0, n). n must be positive.
  std::size_t uniform_index(std::size_t n);

  bool bernoulli(double p) { return uniform() < p; }

  /// Inverse-CDF draw: returns the first index i with u < cumsum[0..i].
  /// If rounding leaves u at or past the final cumulative sum, the last
  /// index with positive mass is returned.
  std::size_t categorical(std::span<const double> probs);

  /// Standard exponential draw (used for Dirichlet sampling).
  double exponential();

  /// Binomial(n, p) count. Exact: sums Bernoulli draws for small n, otherwise
  /// uses std::binomial_distribution driven by this engine.
  std::uint64_t binomial(std::uint64_t n, double p);

 private:
  std::uint64_t root_seed_;
  std::string label_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view text);

}  // namespace ucblab
