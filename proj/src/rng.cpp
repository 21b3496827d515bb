#include "unprompt/rng.hpp"

#include <cmath>

#include "unprompt/errors.hpp"

namespace unprompt {

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// splitmix64 finalizer; full avalanche on 64 bits.
std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t state) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        state ^= p[i];
        state *= kFnvPrime;
    }
    return state;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    return fnv1a64(bytes.data(), bytes.size(), kFnvOffset);
}

StreamRng::StreamRng(std::uint64_t master_seed, std::string_view stream_name) {
    // Fold the stream name into the key so distinct names give unrelated streams
    // even under the same master seed.
    key_ = mix64(master_seed ^ fnv1a64(stream_name));
}

std::uint64_t StreamRng::next_u64() {
    ++counter_;
    return mix64(key_ + kGolden * counter_);
}

double StreamRng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::int64_t StreamRng::uniform_int(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw InvalidRange("uniform_int: empty range");
    // Rejection-free modulo is fine here: ranges in this codebase are tiny
    // compared with 2^64, so the bias is far below double precision anyway.
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next_u64() % span);
}

double StreamRng::normal() {
    // (0,1] for the log argument, [0,1) for the angle.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace unprompt
