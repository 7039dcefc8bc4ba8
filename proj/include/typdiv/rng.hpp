#pragma once

// Portable seeded randomness. Every sampling call draws from its own stream:
// a std::mt19937_64 (bit-exact across standard libraries) seeded with
// splitmix64(seed ^ fnv1a64(stream name)). Bounded draws and shuffles are
// implemented here rather than with <random> distributions, whose output
// is implementation-defined.

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace typdiv {

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view data, std::uint64_t basis = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t value);

class Rng {
public:
    Rng(std::uint64_t seed, std::string_view stream);

    std::uint64_t next() { return engine_(); }
    // Uniform in [0, bound); bound must be positive.
    std::uint64_t below(std::uint64_t bound);

    template <typename T>
    void shuffle(std::vector<T>& items)
    {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace typdiv
