#pragma once

#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "vbench/util.hpp"

namespace vbench {

// SplitMix64. Chosen over <random> engines+distributions because the standard
// distributions are not bit-reproducible across library implementations, and
// every manifest this tool emits must be byte-identical for a given seed on
// any platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Unbiased draw in [0, bound) by rejection.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t v = next();
        while (v >= limit) v = next();
        return v % bound;
    }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(below(n)); }

    // 1-based position in [1, n].
    int position(int n) { return static_cast<int>(below(static_cast<std::uint64_t>(n))) + 1; }

    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool chance(double p) { return unit() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = index(i);
            using std::swap;
            swap(v[i - 1], v[j]);
        }
    }

    // k distinct elements, order random (partial Fisher-Yates).
    template <typename T>
    std::vector<T> sample(std::vector<T> pool, std::size_t k) {
        if (k > pool.size()) throw std::invalid_argument("Rng::sample: k exceeds pool size");
        for (std::size_t i = 0; i < k; ++i) {
            std::size_t j = i + index(pool.size() - i);
            using std::swap;
            swap(pool[i], pool[j]);
        }
        pool.resize(k);
        return pool;
    }

private:
    std::uint64_t state_;
};

// Stream splitting: each generated instance draws from its own stream, derived
// by hashing (root seed, row tag, index). Documented in the README so releases
// can be reproduced item-by-item.
inline std::uint64_t derive_stream(std::uint64_t root, std::string_view tag, std::uint64_t index) {
    std::uint64_t h = fnv1a64(tag);
    h = fnv1a64(std::string_view(reinterpret_cast<const char*>(&root), sizeof root), h);
    h = fnv1a64(std::string_view(reinterpret_cast<const char*>(&index), sizeof index), h);
    // one splitmix step to spread low-entropy inputs
    return Rng(h).next();
}

}  // namespace vbench
