#pragma once

#include <bit>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace rts {

/// Deterministic random stream. std::mt19937_64 is fully specified by the
/// standard, but the standard distributions are not; the helpers here pin the
/// exact draw-to-value mapping so results are bit-identical across compilers.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Unbiased integer in [0, n), n >= 1, via bitmask rejection.
    /// Consumes no state when n == 1.
    std::size_t uniform_index(std::size_t n) {
        if (n <= 1) {
            return 0;
        }
        const std::uint64_t mask =
            ~std::uint64_t{0} >> std::countl_zero(static_cast<std::uint64_t>(n - 1));
        for (;;) {
            const std::uint64_t v = engine_() & mask;
            if (v < n) {
                return static_cast<std::size_t>(v);
            }
        }
    }

    /// Uniform double in [0, 1) with 53-bit resolution.
    double unit_real() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform_real(double lo, double hi) { return lo + (hi - lo) * unit_real(); }

    /// Fisher-Yates, one uniform_index draw per element above the first.
    template <typename T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            std::swap(values[i - 1], values[uniform_index(i)]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace rts
