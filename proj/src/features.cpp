#include "morph/features.hpp"

#include <cmath>

#include "morph/channel.hpp"
#include "morph/fft.hpp"
#include "morph/rng.hpp"

namespace morph {

Spectrogram stft_features(const IqBuffer& sym, int f_bins, int t_frames) {
    if (f_bins < 2 || !is_pow2(static_cast<size_t>(f_bins)))
        throw ConfigError("stft: f_bins must be a power of two");
    if (t_frames < 2) throw ConfigError("stft: t_frames must be >= 2");
    const int n = static_cast<int>(sym.size());
    if (n % (t_frames - 1) != 0)
        throw ConfigError("stft: symbol length must be divisible by t_frames-1");
    const int hop = n / (t_frames - 1);
    const int half = f_bins / 2;

    Spectrogram out;
    out.f_bins = f_bins;
    out.t_frames = t_frames;
    out.data.assign(static_cast<size_t>(2) * f_bins * t_frames, 0.0f);

    std::vector<cplx> frame(f_bins);
    for (int t = 0; t < t_frames; ++t) {
        const int start = t * hop - half;
        for (int i = 0; i < f_bins; ++i) {
            const int idx = start + i;
            frame[i] = (idx >= 0 && idx < n) ? sym.samples[idx] : cplx(0.0, 0.0);
        }
        fft_inplace(frame);
        for (int f = 0; f < f_bins; ++f) {
            out.at(0, f, t) = static_cast<float>(frame[f].real());
            out.at(1, f, t) = static_cast<float>(frame[f].imag());
        }
    }

    double ss = 0.0;
    for (float v : out.data) ss += static_cast<double>(v) * v;
    const double rms = std::sqrt(ss / static_cast<double>(out.data.size()));
    if (rms > 0.0) {
        const float inv = static_cast<float>(1.0 / rms);
        for (float& v : out.data) v *= inv;
    }
    return out;
}

IqBuffer augment(const IqBuffer& sym, double snr_lo, double snr_hi, uint64_t seed) {
    if (snr_lo > snr_hi) throw ConfigError("augment: snr_lo must be <= snr_hi");
    Rng rng(seed);
    const double phase = rng.uniform(0.0, 2.0 * M_PI);
    const double snr = rng.uniform(snr_lo, snr_hi);

    IqBuffer rotated = sym;
    const cplx rot(std::cos(phase), std::sin(phase));
    for (auto& x : rotated.samples) x *= rot;
    return add_awgn_with(rotated, snr, rng);
}

} // namespace morph
