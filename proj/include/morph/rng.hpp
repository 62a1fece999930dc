#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

#include "morph/types.hpp"

namespace morph {

// Deterministic splitmix64 stream. Self-contained so results do not depend on
// the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // [0,1) with 53-bit resolution
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // [0,n)
    uint64_t uniform_int(uint64_t n) {
        // modulo bias is < 2^-40 for n up to 2^24; fine for symbol draws
        return next_u64() % n;
    }

    // standard normal via Box-Muller (pair cached)
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // complex gaussian with unit total variance (1/2 per component)
    cplx cgaussian() {
        double re = gaussian();
        double im = gaussian();
        return {re * M_SQRT1_2, im * M_SQRT1_2};
    }

    // derive an independent stream seed from components
    static uint64_t mix(std::initializer_list<uint64_t> parts) {
        uint64_t h = 0x8a5cd789635d2dffull;
        for (uint64_t p : parts) {
            h ^= p + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
            Rng r(h);
            h = r.next_u64();
        }
        return h;
    }

private:
    uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace morph
