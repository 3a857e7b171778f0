#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>

namespace mch {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Derives an independent stream seed from a root seed and a list of keys.
// Streams only depend on their keys, so results do not depend on the order
// in which workers pick up tasks.
inline std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> keys) {
    std::uint64_t h = splitmix64(root);
    for (std::uint64_t k : keys) h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ULL));
    return h;
}

// Hash of a coordinate vector's bit pattern; used to key streams by node identity.
inline std::uint64_t hash_config(std::span<const double> x) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (double v : x) {
        h = splitmix64(h ^ std::bit_cast<std::uint64_t>(v));
    }
    return h;
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t root, std::initializer_list<std::uint64_t> keys = {}) {
    return Rng(derive_seed(root, keys));
}

}  // namespace mch
