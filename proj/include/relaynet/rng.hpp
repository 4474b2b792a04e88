#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace relaynet {

// SplitMix64 counter-based generator (Steele/Lea/Flood).  Output k of a
// stream is mix(seed + k*gamma), so draws are reproducible bit-for-bit on
// any platform and streams can be forked cheaply from (master seed, id).
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : state_(seed) {}

    RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
        : state_(mix(master_seed ^ mix(stream_id + 0x9e3779b97f4a7c15ULL))) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    // uniform on (0, 1]
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // standard normal via Box-Muller (no libm distribution objects, so the
    // byte stream is identical across standard libraries)
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // circularly symmetric complex Gaussian CN(mu, var)
    std::complex<double> complex_gaussian(std::complex<double> mu, double var) {
        double u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-std::log(u1) * var);  // Rayleigh with E{r^2}=var
        double a = 2.0 * M_PI * u2;
        return mu + std::complex<double>(r * std::cos(a), r * std::sin(a));
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace relaynet
