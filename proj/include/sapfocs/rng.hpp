#pragma once

#include <cstdint>
#include <random>

namespace sapfocs {

/// Seedable random stream with platform-independent output.
///
/// The engine is the 64-bit Mersenne Twister exactly as the C++ standard pins
/// it down; the derived draws below avoid std::uniform_*_distribution, whose
/// results are implementation-defined, so a given seed yields the same stream
/// on every compiler and platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1): the top 53 bits scaled by 2^-53.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n): masked rejection sampling, exactly uniform.
    std::uint64_t uniform_below(std::uint64_t n) {
        if (n == 0) return 0;
        std::uint64_t mask = ~std::uint64_t{0};
        std::uint64_t limit = n - 1;
        int bits = 0;
        while (limit > 0) {
            ++bits;
            limit >>= 1;
        }
        mask = bits == 0 ? 0 : (bits == 64 ? mask : ((std::uint64_t{1} << bits) - 1));
        while (true) {
            std::uint64_t v = next_u64() & mask;
            if (v < n) return v;
        }
    }

    int uniform_int(int n) { return static_cast<int>(uniform_below(static_cast<std::uint64_t>(n))); }

private:
    std::mt19937_64 engine_;
};

} // namespace sapfocs
