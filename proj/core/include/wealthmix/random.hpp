#ifndef WEALTHMIX_RANDOM_HPP
#define WEALTHMIX_RANDOM_HPP

#include <array>
#include <cstdint>

namespace wealthmix {

// xoshiro256** seeded through the splitmix64 finalizer. All sampling in the
// library draws through this generator rather than <random> distributions so
// that a seed produces the identical stream on every platform and compiler.
//
// Streams: stream(i) derives an independent generator from (seed, i). Each
// bootstrap replicate or simulation experiment takes its own stream, which
// makes results invariant to evaluation order.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed) {
        std::uint64_t z = seed;
        for (auto& word : state_) word = splitmix64(z);
    }

    Rng stream(std::uint64_t index) const {
        std::uint64_t z = seed_ ^ (0x9E3779B97F4A7C15ULL * (index + 1));
        return Rng(splitmix64(z));
    }

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform draw on the open interval (0,1): 53-bit mantissa offset by half
    // an ulp so 0 and 1 are unreachable. Quantile functions may be evaluated
    // on the result without endpoint guards.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Uniform index in [0, n). Lemire multiply-shift; bias is n/2^64, far
    // below statistical noise for any feasible sample size.
    std::uint64_t next_index(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

private:
    static std::uint64_t splitmix64(std::uint64_t& z) {
        z += 0x9E3779B97F4A7C15ULL;
        std::uint64_t x = z;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t seed_;
    std::array<std::uint64_t, 4> state_{};
};

}  // namespace wealthmix

#endif
