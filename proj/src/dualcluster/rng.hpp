#pragma once

#include <cmath>
#include <cstdint>

namespace dualcluster::rng {

// splitmix64 finalizer; a counter-based stream is mix(key + k*gamma).
inline std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t combine(std::uint64_t a, std::uint64_t b) {
  return mix(a ^ (0x9e3779b97f4a7c15ULL + (b << 6) + (b >> 2) + mix(b)));
}

// Keyed counter stream: deterministic, cheap to seek, no shared state.
// Distinct (seed, stream) pairs give statistically independent sequences,
// which is what makes sharded reductions reproducible at any thread count.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t stream)
      : key_(combine(seed, stream)), counter_(0) {}

  std::uint64_t next_u64() { return mix(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }

  // uniform in (0,1); never exactly 0 or 1
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // standard normal (Box-Muller, both values used)
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // uniform integer in [0, bound) by rejection-free 128-bit multiply
  std::uint64_t next_below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace dualcluster::rng
