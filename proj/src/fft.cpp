#include "morph/fft.hpp"

#include <cmath>

namespace morph {

void fft_inplace(std::vector<cplx>& a) {
    const size_t n = a.size();
    if (n <= 1) return;
    if (!is_pow2(n)) throw ShapeError("fft size must be a power of two");

    // bit-reversal permutation
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    for (size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * M_PI / static_cast<double>(len);
        const cplx wlen(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (size_t k = 0; k < len / 2; ++k) {
                cplx u = a[i + k];
                cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

void ifft_inplace(std::vector<cplx>& a) {
    for (auto& x : a) x = std::conj(x);
    fft_inplace(a);
    const double inv = 1.0 / static_cast<double>(a.size());
    for (auto& x : a) x = std::conj(x) * inv;
}

std::vector<cplx> fft(std::vector<cplx> a) {
    fft_inplace(a);
    return a;
}

} // namespace morph
