#pragma once

#include <cstdint>
#include <vector>

#include "morph/types.hpp"

namespace morph {

// 2 x F x T real tensor: channel 0 = real part, channel 1 = imaginary part of
// the short-time transform.
struct Spectrogram {
    int f_bins = 0;
    int t_frames = 0;
    std::vector<float> data;  // layout [ch][f][t]

    float& at(int ch, int f, int t) {
        return data[(static_cast<size_t>(ch) * f_bins + f) * t_frames + t];
    }
    float at(int ch, int f, int t) const {
        return data[(static_cast<size_t>(ch) * f_bins + f) * t_frames + t];
    }
};

// Rectangular-window STFT, window length f_bins, hop N/(t_frames-1), centered
// framing with f_bins/2 zero-padding on each side, whole tensor divided by its
// RMS (zeros stay zeros).
Spectrogram stft_features(const IqBuffer& sym, int f_bins = 64, int t_frames = 129);

// Uniform random initial phase, then AWGN at an SNR drawn uniformly from
// [snr_lo, snr_hi] dB. Deterministic for a given seed.
IqBuffer augment(const IqBuffer& sym, double snr_lo, double snr_hi, uint64_t seed);

} // namespace morph
