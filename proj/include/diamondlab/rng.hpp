#pragma once

#include <cstdint>

namespace diamondlab {

/// Counter-based generator: every draw is a pure function of
/// (seed, stream, counter), so parallel sampling is reproducible
/// independently of thread count and iteration order.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream) {}

    std::uint64_t bits(std::uint64_t counter) const {
        return mix(seed_ ^ (0x9e3779b97f4a7c15ULL * (stream_ + 1)) ^ mix(counter));
    }

    /// Uniform double in [0,1) with a 53-bit dyadic mantissa.
    double uniform(std::uint64_t counter) const {
        return (double)(bits(counter) >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [0,1) from a (counter, slot) pair.
    double uniform(std::uint64_t counter, std::uint64_t slot) const {
        return (double)(bits(counter * 0x100000001b3ULL + slot) >> 11) * 0x1.0p-53;
    }

    bool coin(std::uint64_t counter, std::uint64_t slot) const {
        return (bits(counter * 0x100000001b3ULL + slot) & 1) != 0;
    }

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_;
};

}  // namespace diamondlab
