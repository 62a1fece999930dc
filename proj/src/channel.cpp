#include "morph/channel.hpp"

#include <cmath>

namespace morph {

IqBuffer add_awgn_with(const IqBuffer& sig, double snr_db, Rng& rng) {
    if (sig.empty()) throw ShapeError("add_awgn: empty signal");

    double p = 0.0;
    for (const auto& x : sig.samples) p += std::norm(x);
    p /= static_cast<double>(sig.size());

    const double noise_var = p / std::pow(10.0, snr_db / 10.0);
    const double amp = std::sqrt(noise_var);

    IqBuffer out = sig;
    for (auto& x : out.samples) x += amp * rng.cgaussian();
    return out;
}

IqBuffer add_awgn(const IqBuffer& sig, double snr_db, uint64_t seed) {
    Rng rng(seed);
    return add_awgn_with(sig, snr_db, rng);
}

IqBuffer apply_offsets(const IqBuffer& sig, const ChannelConfig& cfg) {
    if (std::abs(cfg.sfo_ppm) >= 100.0)
        throw ConfigError("apply_offsets: |sfo_ppm| must be < 100");

    IqBuffer rotated = sig;
    const size_t n = sig.size();
    for (size_t i = 0; i < n; ++i) {
        const double ph = cfg.phase0_rad +
                          2.0 * M_PI * cfg.cfo_hz * static_cast<double>(i) / sig.fs;
        rotated.samples[i] *= cplx(std::cos(ph), std::sin(ph));
    }
    if (cfg.sfo_ppm == 0.0) return rotated;

    // resample the time axis by (1 + ppm*1e-6); same length, clamped at the end
    const double factor = 1.0 + cfg.sfo_ppm * 1e-6;
    IqBuffer out;
    out.fs = sig.fs;
    out.samples.resize(n);
    for (size_t i = 0; i < n; ++i) {
        double t = static_cast<double>(i) * factor;
        if (t >= static_cast<double>(n - 1)) t = static_cast<double>(n - 1);
        const size_t i0 = static_cast<size_t>(t);
        const size_t i1 = (i0 + 1 < n) ? i0 + 1 : i0;
        const double frac = t - static_cast<double>(i0);
        out.samples[i] = rotated.samples[i0] * (1.0 - frac) + rotated.samples[i1] * frac;
    }
    return out;
}

} // namespace morph
