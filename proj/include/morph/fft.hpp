#pragma once

#include <cstddef>
#include <vector>

#include "morph/types.hpp"

namespace morph {

constexpr bool is_pow2(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 DIT transform, unnormalized forward.
// Size must be a power of two.
void fft_inplace(std::vector<cplx>& a);

// Inverse transform with 1/N normalization.
void ifft_inplace(std::vector<cplx>& a);

std::vector<cplx> fft(std::vector<cplx> a);

} // namespace morph
