#include "ucblab/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace ucblab {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

RngStream::RngStream(std::uint64_t root_seed, std::string_view label)
    : root_seed_(root_seed),
      label_(label),
      engine_(splitmix64(splitmix64(root_seed) ^ fnv1a64(label))) {}

RngStream RngStream::child(std::string_view sub) const {
  std::string name = label_;
  name += '/';
  name += sub;
  return RngStream(root_seed_, name);
}

double RngStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t RngStream::uniform_index(std::size_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
  // Rejection sampling keeps the draw unbiased.
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return static_cast<std::size_t>(x % n);
}

std::size_t RngStream::categorical(std::span<const double> probs) {
  if (probs.empty()) throw std::invalid_argument("categorical: empty distribution");
  const double u = uniform();
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0.0) last_positive = i;
    cumulative += probs[i];
    if (u < cumulative && probs[i] > 0.0) return i;
  }
  return last_positive;
}

double RngStream::exponential() {
  // 1 - u lies in (0, 1], so the log is finite.
  return -std::log(1.0 - uniform());
}

std::uint64_t RngStream::binomial(std::uint64_t n, double p) {
  if (n == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  if (n <= 64) {
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < n; ++i) hits += bernoulli(p) ? 1 : 0;
    return hits;
  }
  std::binomial_distribution<std::uint64_t> dist(n, p);
  return dist(engine_);
}

}  // namespace ucblab
