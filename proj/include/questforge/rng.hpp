#pragma once

// Deterministic random number generation. Everything that samples in this
// codebase goes through Rng so that a (seed, stream label) pair pins the whole
// run, independent of platform or standard library version. The core is
// splitmix64, which is tiny, fast and passes the usual statistical batteries
// for the amount of randomness we need here.

#include <cstdint>
#include <cmath>
#include <string_view>
#include <vector>

namespace questforge {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// FNV-1a, used for stable content hashes and for deriving rng substreams
// from string labels. Not cryptographic, does not need to be.
inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::uint64_t hash_mix(std::uint64_t a, std::uint64_t b) {
    // One splitmix round over the xor keeps derived seeds well spread even
    // when inputs are small consecutive integers.
    std::uint64_t s = a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2));
    return splitmix64(s);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed = 0x51ab5e5ed00dull) : state_(seed) {}

    std::uint64_t next_u64() { return splitmix64(state_); }

    // Uniform in [0, 1). 53 bits of mantissa.
    double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [0, n). Multiply-shift; bias is negligible for n << 2^64.
    std::uint64_t below(std::uint64_t n) {
        if (n <= 1) return 0;
        return std::uint64_t((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // Inclusive integer range.
    std::int64_t range(std::int64_t lo, std::int64_t hi) {
        return lo + std::int64_t(below(std::uint64_t(hi - lo + 1)));
    }

    bool chance(double p) { return uniform01() < p; }

    // Box-Muller without the cached spare, so the draw count per call is
    // fixed and streams stay reproducible no matter the call pattern.
    double normal(double mean = 0.0, double stddev = 1.0) {
        double u1 = uniform01();
        double u2 = uniform01();
        if (u1 < 1e-300) u1 = 1e-300;
        double r = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * r * std::cos(6.283185307179586 * u2);
    }

    // Independent child stream. Does not advance the parent, so forks are a
    // pure function of (parent state, salt); give each child a distinct salt.
    Rng fork(std::uint64_t salt) const { return Rng(hash_mix(state_, salt)); }
    Rng fork(std::string_view label) const { return fork(fnv1a64(label)); }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = std::size_t(below(i));
            using std::swap;
            swap(v[i - 1], v[j]);
        }
    }

    template <class T>
    const T& pick(const std::vector<T>& v) {
        return v[std::size_t(below(v.size()))];
    }

    // Index sampled proportionally to non-negative weights. Falls back to
    // uniform when the total mass is zero.
    std::size_t pick_weighted(const std::vector<double>& w) {
        double total = 0.0;
        for (double x : w) total += x;
        if (!(total > 0.0)) return std::size_t(below(w.size()));
        double t = uniform01() * total;
        double acc = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            acc += w[i];
            if (t < acc) return i;
        }
        return w.size() - 1;
    }

    std::uint64_t state() const { return state_; }
    void set_state(std::uint64_t s) { state_ = s; }

private:
    std::uint64_t state_;
};

} // namespace questforge
