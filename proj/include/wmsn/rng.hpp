#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace wmsn {

// Deterministic random stream. The raw engine is std::mt19937_64; all
// derived values go through fixed bit manipulations so a (seed, label)
// pair reproduces the same sequence on any platform.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t bits() { return gen_(); }

    // Uniform double in [0, 1).
    double uniform() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n). n must be positive.
    std::uint64_t uniform_int(std::uint64_t n) { return bits() % n; }

    bool coin() { return (bits() & 1u) != 0; }

private:
    std::mt19937_64 gen_;
};

// splitmix64 step, used to spread seeds and hash substream labels.
std::uint64_t splitmix64(std::uint64_t& state);

// Derive an independent substream from a run seed, a purpose label and an
// index (e.g. a node id). Same inputs, same stream.
RandomStream derive_stream(std::uint64_t seed, std::string_view label, std::uint64_t index = 0);

// FNV-1a over a byte string; used for config digests.
std::uint64_t fnv1a(std::string_view bytes);

} // namespace wmsn
