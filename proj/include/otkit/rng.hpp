#pragma once

#include <cmath>
#include <cstdint>

namespace otkit {

// splitmix64: deterministic, platform-independent stream. Used everywhere a
// seeded random value is needed so runs are reproducible bit-for-bit.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform in [0, n)
  uint64_t next_below(uint64_t n) { return n ? next_u64() % n : 0; }

  double next_exponential() { return -std::log1p(-next_double()); }

  // derive an independent stream for a named purpose
  Rng fork(uint64_t salt) const {
    Rng r(state_ ^ (0xd1342543de82ef95ULL * (salt + 1)));
    r.next_u64();
    return r;
  }

 private:
  uint64_t state_;
};

}  // namespace otkit
