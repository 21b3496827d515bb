#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace unprompt {

// Counter-based generator: every output is a hash of (key, counter), so a stream
// can be replayed from any draw index and two streams with different names never
// collide. Copying a StreamRng snapshots its position, which the engine tests use
// to audit how many draws an operation consumed.
class StreamRng {
public:
    StreamRng(std::uint64_t master_seed, std::string_view stream_name);

    // Raw 64-bit draw.
    std::uint64_t next_u64();

    // Uniform on [0, 1) with 53-bit resolution.
    double uniform();

    // Uniform integer on [lo, hi] inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    // Standard normal via Box-Muller. Always consumes exactly two raw draws;
    // nothing is cached, so draw accounting stays exact.
    double normal();

    // Number of raw 64-bit draws consumed so far.
    std::uint64_t draw_count() const { return counter_; }

    std::uint64_t key() const { return key_; }

private:
    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

// Stable 64-bit hash of a byte string (FNV-1a). Used for stream naming,
// config hashing and schedule fingerprints.
std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t seed_state);

}  // namespace unprompt
