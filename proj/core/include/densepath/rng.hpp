#pragma once

#include <cstdint>

namespace densepath {

// Deterministic PRNG (splitmix64). The standard <random> distributions are
// implementation-defined, so everything that has to be bit-reproducible
// across platforms draws from this instead.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  // uniform in [0, 1)
  double uniform();
  // uniform in [lo, hi)
  double uniform(double lo, double hi);
  // uniform integer in [0, n), n > 0
  int uniform_int(int n);
  // standard normal via Box-Muller
  double gaussian();

  // Independent child stream; forking does not advance this generator.
  Rng fork(std::uint64_t stream) const;

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace densepath
