#pragma once

#include <cstdint>

namespace quadisc {

// splitmix64: fixed-increment Weyl sequence hashed by two xor-multiply rounds.
// The output stream for a given seed is part of the library contract and must
// stay bit-identical across platforms; do not "improve" the constants.
class Splitmix64 {
public:
    explicit Splitmix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next_u64() noexcept {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t x = state_;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    // Uniform on [0,1) with 53 random bits; 1.0 is unreachable.
    double next_uniform() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

} // namespace quadisc
