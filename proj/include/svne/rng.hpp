#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace svne {

// Seedable random stream. All value mappings are hand-rolled on top of
// mt19937_64 so that a given seed produces the same sequence on every
// platform (the std distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Named substream of a master seed, so independent concerns (topology,
  // demands, arrivals, swarm) can be re-seeded without disturbing each other.
  static Rng stream(std::uint64_t master, std::string_view name);

  std::uint64_t next_u64() { return gen_(); }

  // Uniform double in [0, 1).
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [lo, hi] inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  double exponential(double rate);

  template <typename T>
  const T& pick(const std::vector<T>& values) {
    if (values.empty()) throw std::invalid_argument("Rng::pick: empty set");
    return values[static_cast<std::size_t>(
        uniform_int(0, static_cast<std::int64_t>(values.size()) - 1))];
  }

  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      auto j = static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i) - 1));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

// Stable 64-bit mix used to derive substream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::string_view tag);

}  // namespace svne
