#pragma once

#include <cmath>
#include <cstdint>

namespace gstar {

/// Portable counter-based random source. Stream value n is the splitmix64
/// finalizer applied to seed + n * 0x9E3779B97F4A7C15; uniforms take the top
/// 53 bits shifted into (0, 1); Gaussians come from Box-Muller on consecutive
/// uniform pairs. Bit-identical across platforms by construction.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t x = seed_ + (++counter_) * 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    /// Uniform in (0, 1); never returns 0 or 1.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
    }

    /// Standard normal via Box-Muller; consumes two uniforms per pair.
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

  private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace gstar
