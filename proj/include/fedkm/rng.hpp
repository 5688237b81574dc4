#ifndef FEDKM_RNG_HPP
#define FEDKM_RNG_HPP

#include <cstdint>
#include <random>

namespace fedkm {

using Rng = std::mt19937_64;

// Independent random streams are derived from one base seed so that
// clients, rounds and methods can run in parallel without sharing an
// engine. Streams are identified by a tag plus an integer id.
enum class Stream : std::uint64_t {
    client_init = 1,
    server_aggregate = 2,
    dataset = 3,
    partition = 4,
    central = 5,
    oneshot = 6,
    locations = 7,
};

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, Stream stream,
                                 std::uint64_t id = 0) {
    return mix64(mix64(base + static_cast<std::uint64_t>(stream)) + id);
}

inline Rng make_rng(std::uint64_t base, Stream stream, std::uint64_t id = 0) {
    return Rng(derive_seed(base, stream, id));
}

} // namespace fedkm

#endif
