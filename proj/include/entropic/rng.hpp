#pragma once

// Seeded, splittable random streams. A stream is identified by the run seed
// plus a key path (experiment tag, n, sigma index, trial index, ...), so each
// trial draws from its own generator regardless of execution order.

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace entropic {

class Rng {
 public:
  // Bump when any derivation or transform below changes.
  static constexpr std::string_view kName = "mt19937_64+splitmix64/v1";

  explicit Rng(std::uint64_t seed);
  // Independent stream for the given key path under `seed`.
  static Rng stream(std::uint64_t seed, std::initializer_list<std::uint64_t> key);

  std::uint64_t next_u64() { return engine_(); }
  // Uniform in [0, 1) with 53 random bits.
  double uniform01();
  // Unit-rate exponential.
  double exponential();
  double standard_normal();
  // Uniform integer in [0, bound), unbiased.
  std::uint64_t uniform_index(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace entropic
