#pragma once

#include <cstdint>
#include <random>

namespace expforge {

// Seeded RNG with hand-rolled draw helpers. std::uniform_*_distribution is
// implementation-defined, which would break byte-identical reproducibility
// across toolchains, so all draws go through these.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform double in [0,1)
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform index in [0,n); n must be > 0
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

    bool coin() { return (engine_() & 1u) != 0; }

private:
    std::mt19937_64 engine_;
};

} // namespace expforge
