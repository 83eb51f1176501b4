#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

#include "ssclust/errors.hpp"

namespace ssclust {

// splitmix64 finalizer. Whitens user-provided seeds and stream indices.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic substream seed from a root seed and a stream path, e.g.
// derive_seed(seed, {G, model_index, restart}). Independent tasks draw from
// independent streams, so results do not depend on execution order.
inline std::uint64_t derive_seed(std::uint64_t seed,
                                 std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = mix64(seed);
    for (std::uint64_t v : path) {
        h = mix64(h ^ mix64(v + 0x71c67d9360c85b4fULL));
    }
    return h;
}

inline std::mt19937_64 make_rng(std::uint64_t seed,
                                std::initializer_list<std::uint64_t> path = {}) {
    return std::mt19937_64(derive_seed(seed, path));
}

inline double uniform01(std::mt19937_64& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

// Samples an index proportionally to the given nonnegative weights by
// cumulative inversion. Zero total weight falls back to a uniform pick.
inline std::size_t sample_weighted(std::mt19937_64& rng,
                                   const std::vector<double>& weights) {
    if (weights.empty()) throw DomainError("sample_weighted: no weights");
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw DomainError("sample_weighted: negative weight");
        total += w;
    }
    if (total <= 0.0) return uniform_index(rng, weights.size());
    double u = uniform01(rng) * total;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
        acc += weights[i];
        if (u < acc) return i;
    }
    return weights.size() - 1;
}

// In-place Fisher-Yates shuffle.
template <class T>
void shuffle_vector(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = uniform_index(rng, i);
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace ssclust
