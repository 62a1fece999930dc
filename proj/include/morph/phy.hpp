#pragma once

#include "morph/types.hpp"

namespace morph {

// One CSS chirp: spreading factor, bandwidth, sample rate and the encoded
// initial-frequency index.
struct ChirpConfig {
    int sf = 7;                // 7..12
    double bw = 125000.0;      // Hz
    double fs = 125000.0;      // Hz, integer multiple of bw
    int symbol_value = 0;      // [0, 2^sf)

    int chips() const { return 1 << sf; }
    int oversample() const;    // fs/bw as a validated integer
    int num_samples() const { return chips() * oversample(); }
    void validate() const;     // throws ConfigError
};

struct DechirpResult {
    int value = 0;
    double peak_mag = 0.0;
};

// Generate one chirp. Phase is accumulated from the frequency ramp evaluated
// at sample midpoints: the fold at +bw/2 is exact and a value-v chirp equals
// the base chirp cyclically shifted by v*(fs/bw) samples up to a constant
// phase (zero net phase per period).
IqBuffer gen_chirp(const ChirpConfig& cfg, bool upchirp = true);

// Multiply by the base down-chirp, transform, return the peak bin.
// Expects 2^sf samples at chip rate. Tie-break: lowest bin index.
DechirpResult dechirp_decode(const IqBuffer& sym, int sf);

// Same, against a caller-provided base down-chirp (hot loops reuse it).
DechirpResult dechirp_decode_with(const IqBuffer& sym, const IqBuffer& downchirp);

// Low-pass to +-bw/2 and keep every (fs/bw)-th sample. Identity when fs == bw.
// 64-tap Hamming windowed-sinc.
IqBuffer decimate_to_chiprate(const IqBuffer& sig, double bw);

} // namespace morph
