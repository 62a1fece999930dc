#pragma once

#include <cstdint>

#include "morph/rng.hpp"
#include "morph/types.hpp"

namespace morph {

struct ChannelConfig {
    double snr_db = 0.0;
    double cfo_hz = 0.0;
    double sfo_ppm = 0.0;
    double phase0_rad = 0.0;
    uint64_t seed = 0;
};

// Transmit-referenced AWGN: noise variance is measured against the mean power
// of the input signal. Deterministic for a given seed.
IqBuffer add_awgn(const IqBuffer& sig, double snr_db, uint64_t seed);

// Same, drawing from an existing stream (used by augmentation).
IqBuffer add_awgn_with(const IqBuffer& sig, double snr_db, Rng& rng);

// Initial phase + CFO rotation, then SFO resampling by linear interpolation.
// Noise is not applied here.
IqBuffer apply_offsets(const IqBuffer& sig, const ChannelConfig& cfg);

} // namespace morph
