#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace incidence {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u32 = std::uint32_t;

// Thrown when an enumeration or search exceeds its configured budget.
// Callers that can report "undecided" catch this; everything else lets it
// propagate.
struct ResourceLimit : std::runtime_error {
    explicit ResourceLimit(const std::string& what) : std::runtime_error(what) {}
};

inline u64 splitmix64(u64& state) {
    u64 z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Small deterministic PRNG with a portable, fixed output sequence.
// Reports quote seeds verbatim, so the stream must not depend on the
// platform or standard library.
class Rng {
public:
    explicit Rng(u64 seed) : state_(seed) {}

    u64 next() { return splitmix64(state_); }

    // Uniform in [0, n), n >= 1, by rejection.
    u64 below(u64 n) {
        if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
        if ((n & (n - 1)) == 0) return next() & (n - 1);
        const u64 limit = ~u64{0} - (~u64{0} % n);
        for (;;) {
            u64 v = next();
            if (v < limit) return v % n;
        }
    }

    // Independent stream for item `index` of a seeded experiment.
    static Rng for_item(u64 seed, u64 index) {
        u64 s = seed ^ (0xa0761d6478bd642fULL * (index + 1));
        splitmix64(s);
        return Rng(s);
    }

private:
    u64 state_;
};

}  // namespace incidence
