#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace wapprox {

/// splitmix64 step; good avalanche, used only for seed derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Derives the seed of substream `stream_index` from a master seed.
/// Replication k of an experiment always uses stream (master_seed, k),
/// so results do not depend on how replications are scheduled.
inline std::uint64_t derive_stream_seed(std::uint64_t master_seed,
                                        std::uint64_t stream_index) {
    std::uint64_t s = master_seed + 0xD1B54A32D192ED03ULL * (stream_index + 1);
    std::uint64_t a = splitmix64(s);
    std::uint64_t b = splitmix64(s);
    return a ^ (b >> 1);
}

/// Seeded random stream: mt19937_64 plus explicit Box-Muller, so the
/// produced sequence is fully determined by the seed (no reliance on
/// implementation-defined std::normal_distribution).
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}
    RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
        : engine_(derive_stream_seed(master_seed, stream_index)) {}

    /// Uniform in (0, 1]; 53-bit resolution.
    double uniform01() {
        return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; second variate of each pair cached.
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace wapprox
