#ifndef MIXEDSCORE_RANDOM_HPP
#define MIXEDSCORE_RANDOM_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace mixedscore {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Counter-based seed derivation: distinct key tuples give unrelated streams,
// so work items can be seeded independently of execution order.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys) {
    std::uint64_t h = splitmix64(master);
    for (auto k : keys) h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ULL));
    return h;
}

// Uniform in [0, 1) from the top 53 bits. The std distributions are not
// specified bit-for-bit across standard libraries, this is.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform index in [0, n), n > 0.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
    auto i = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
    return i < n ? i : n - 1;
}

}  // namespace mixedscore

#endif  // MIXEDSCORE_RANDOM_HPP
