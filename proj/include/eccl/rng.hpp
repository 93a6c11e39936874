#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace eccl {

// Deterministic, platform-independent random stream with named hierarchical
// derivation. Every stream is identified by a 64-bit key; child streams are
// derived by hashing the parent key with a label or index, so independent
// components can draw in parallel without sharing mutable state.
class RngStream {
  public:
    explicit RngStream(uint64_t key);

    // Child stream for a named component ("rollout", "world", ...).
    RngStream derive(std::string_view label) const;
    // Child stream for an indexed instance (episode i, seed s, ...).
    RngStream derive(uint64_t index) const;

    uint64_t key() const { return key_; }
    uint64_t state() const { return state_; }
    void restore(uint64_t state) { state_ = state; }

    uint64_t next_u64();
    // Uniform in [0, 1) with 53 bits of mantissa.
    double next_double();
    // Uniform integer in [0, n), unbiased. n must be > 0.
    uint64_t next_below(uint64_t n);
    // Uniform integer in [lo, hi] inclusive.
    int64_t next_int(int64_t lo, int64_t hi);
    bool next_bool(double p_true);

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[static_cast<size_t>(next_below(v.size()))];
    }

  private:
    uint64_t key_;
    uint64_t state_;
};

// FNV-1a over arbitrary bytes, used for stream derivation and content ids.
uint64_t hash_bytes(uint64_t seed, std::string_view bytes);
uint64_t hash_u64(uint64_t seed, uint64_t value);

}  // namespace eccl
