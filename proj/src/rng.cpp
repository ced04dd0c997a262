#include "wmsn/rng.hpp"

namespace wmsn {

std::uint64_t splitmix64(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

RandomStream derive_stream(std::uint64_t seed, std::string_view label, std::uint64_t index)
{
    std::uint64_t state = seed ^ fnv1a(label);
    splitmix64(state);
    state ^= 0x5851f42d4c957f2dULL * (index + 1);
    std::uint64_t sub = splitmix64(state);
    sub ^= splitmix64(state);
    return RandomStream(sub);
}

} // namespace wmsn
