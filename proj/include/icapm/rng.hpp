#pragma once

#include <cstdint>
#include <random>

namespace icapm {

/// Seeded 64-bit generator (std::mt19937_64) with a fully specified Gaussian
/// transform (Box-Muller on 53-bit uniforms), so a seed pins the exact draw
/// sequence independent of the standard library's distribution internals.
/// Monte Carlo replications use substreams seeded as seed XOR rep-index.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    static Rng substream(std::uint64_t seed, std::uint64_t rep) { return Rng(seed ^ rep); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    /// Standard normal draw; pairs are generated and the second is cached.
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - uniform();  // (0, 1]: keeps log() finite
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace icapm
