#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace castnet {

/// Seeded generator whose output sequence is identical on every platform.
///
/// std::uniform_int_distribution and std::shuffle are implementation
/// defined, so bounded draws and shuffles are done here by hand on top of
/// the raw mt19937_64 stream (which the standard fully specifies).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound) {
        // rejection sampling removes modulo bias
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x = engine_();
        while (x >= limit) x = engine_();
        return x % bound;
    }

    template <class T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

} // namespace castnet
