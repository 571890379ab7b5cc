#pragma once

#include <cstdint>

namespace dope {

// Counter-based generator: the n-th draw is a pure function of (seed, stream, n),
// so any implementation in any language can replay the exact uniform sequence.
//
//   state_n = seed + stream * 0xD2B74407B1CE6E93 + n * 0x9E3779B97F4A7C15   (n = 1, 2, ...)
//   out_n   = splitmix64_mix(state_n)
//   u_n     = (out_n >> 11) * 2^-53                  in [0, 1)
//
// splitmix64_mix(z): z ^= z>>30; z *= 0xBF58476D1CE4E5B9; z ^= z>>27;
//                    z *= 0x94D049BB133111EB; z ^= z>>31.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : base_(seed + stream * 0xD2B74407B1CE6E93ull), counter_(0) {}

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t next_u64() {
        ++counter_;
        return mix(base_ + counter_ * 0x9E3779B97F4A7C15ull);
    }

    // Uniform in [0,1), 53 random bits.
    double next_u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Draws consumed so far (for manifest audit).
    std::uint64_t draws() const { return counter_; }

  private:
    std::uint64_t base_;
    std::uint64_t counter_;  // number of draws taken
};

}  // namespace dope
