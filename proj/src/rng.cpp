#include "eccl/rng.hpp"

namespace eccl {

namespace {

constexpr uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr uint64_t kFnvPrime = 1099511628211ULL;

uint64_t splitmix64(uint64_t& x) {
    x += 0x9E3779B97F4A7C15ULL;
    uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

uint64_t hash_bytes(uint64_t seed, std::string_view bytes) {
    uint64_t h = kFnvOffset ^ seed;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= kFnvPrime;
    }
    return h;
}

uint64_t hash_u64(uint64_t seed, uint64_t value) {
    uint64_t h = kFnvOffset ^ seed;
    for (int i = 0; i < 8; ++i) {
        h ^= (value >> (i * 8)) & 0xFF;
        h *= kFnvPrime;
    }
    return h;
}

RngStream::RngStream(uint64_t key) : key_(key), state_(key) {
    // Warm the state so nearby keys do not produce correlated first draws.
    splitmix64(state_);
}

RngStream RngStream::derive(std::string_view label) const {
    return RngStream(hash_bytes(key_, label));
}

RngStream RngStream::derive(uint64_t index) const {
    return RngStream(hash_u64(key_, index));
}

uint64_t RngStream::next_u64() { return splitmix64(state_); }

double RngStream::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

uint64_t RngStream::next_below(uint64_t n) {
    // Rejection sampling over the top of the range keeps the draw unbiased.
    uint64_t threshold = (0 - n) % n;
    for (;;) {
        uint64_t r = next_u64();
        if (r >= threshold) return r % n;
    }
}

int64_t RngStream::next_int(int64_t lo, int64_t hi) {
    return lo + static_cast<int64_t>(next_below(static_cast<uint64_t>(hi - lo + 1)));
}

bool RngStream::next_bool(double p_true) { return next_double() < p_true; }

}  // namespace eccl
