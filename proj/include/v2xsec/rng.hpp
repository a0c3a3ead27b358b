#pragma once

#include <cmath>
#include <cstdint>

namespace v2xsec {

// splitmix64, used for seeding and stream derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// xoshiro256++ with per-stream seeding. Streams are derived from a master
// seed and a counter, so trial i always sees the same substream no matter
// how trials are scheduled across threads.
class Rng {
public:
    Rng() : Rng(0xD1B54A32D192ED03ULL) {}

    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    static Rng for_stream(std::uint64_t master_seed, std::uint64_t stream) {
        return Rng(master_seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1)));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0,1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in (0,1], safe as a log() argument
    double uniform_pos() { return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; }

    double exponential() { return -std::log(uniform_pos()); }

    // gamma(k,1) for integer shape k >= 0
    double gamma_int(int k) {
        double acc = 0.0;
        for (int i = 0; i < k; ++i) acc += exponential();
        return acc;
    }

    long poisson(double mean) {
        if (mean <= 0.0) return 0;
        if (mean < 30.0) return poisson_knuth(mean);
        return poisson_ptrs(mean);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    long poisson_knuth(double mean) {
        const double limit = std::exp(-mean);
        long n = 0;
        double prod = uniform_pos();
        while (prod > limit) {
            ++n;
            prod *= uniform_pos();
        }
        return n;
    }

    // Hormann's PTRS transformed-rejection sampler, exact for mean >= 10.
    long poisson_ptrs(double mean) {
        const double b = 0.931 + 2.53 * std::sqrt(mean);
        const double a = -0.059 + 0.02483 * b;
        const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
        const double v_r = 0.9277 - 3.6224 / (b - 2.0);
        const double log_mean = std::log(mean);
        for (;;) {
            double u = uniform() - 0.5;
            double v = uniform_pos();
            double us = 0.5 - std::fabs(u);
            double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
            if (us >= 0.07 && v <= v_r) return static_cast<long>(k);
            if (k < 0.0 || (us < 0.013 && v > us)) continue;
            if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
                k * log_mean - mean - std::lgamma(k + 1.0)) {
                return static_cast<long>(k);
            }
        }
    }

    std::uint64_t s_[4];
};

}  // namespace v2xsec
