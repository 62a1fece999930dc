#include "morph/phy.hpp"

#include <algorithm>
#include <cmath>

#include "morph/fft.hpp"

namespace morph {

int ChirpConfig::oversample() const {
    const double ratio = fs / bw;
    const int os = static_cast<int>(std::lround(ratio));
    if (os < 1 || std::abs(ratio - os) > 1e-9)
        throw ConfigError("fs must be an integer multiple of bw");
    return os;
}

void ChirpConfig::validate() const {
    if (sf < 7 || sf > 12) throw ConfigError("sf must be in [7,12]");
    if (bw <= 0 || fs <= 0) throw ConfigError("bw and fs must be positive");
    (void)oversample();
    if (symbol_value < 0 || symbol_value >= chips())
        throw ConfigError("symbol_value out of [0, 2^sf)");
}

IqBuffer gen_chirp(const ChirpConfig& cfg, bool upchirp) {
    cfg.validate();
    const int n_chips = cfg.chips();
    const int os = cfg.oversample();
    const int n = n_chips * os;
    const double slope = cfg.bw / n_chips;   // Hz per chip

    IqBuffer out;
    out.fs = cfg.fs;
    out.samples.resize(n);
    double phase = 0.0;
    for (int i = 0; i < n; ++i) {
        out.samples[i] = {std::cos(phase), std::sin(phase)};
        // chip position at the midpoint of this sample interval, folded
        double p = std::fmod(cfg.symbol_value + (i + 0.5) / os, n_chips);
        double f = -cfg.bw / 2.0 + p * slope;
        if (!upchirp) f = -f;
        phase += 2.0 * M_PI * f / cfg.fs;
        if (phase > M_PI) phase -= 2.0 * M_PI;
        if (phase < -M_PI) phase += 2.0 * M_PI;
    }
    return out;
}

DechirpResult dechirp_decode_with(const IqBuffer& sym, const IqBuffer& downchirp) {
    const size_t n = downchirp.size();
    if (sym.size() != n) throw ShapeError("dechirp: symbol length mismatch");

    std::vector<cplx> work(n);
    for (size_t i = 0; i < n; ++i) work[i] = sym.samples[i] * downchirp.samples[i];
    fft_inplace(work);

    int best = 0;
    double best_mag = -1.0;
    for (size_t k = 0; k < n; ++k) {
        const double m = std::abs(work[k]);
        // strictly greater keeps the lowest bin on exact ties
        if (m > best_mag) {
            best_mag = m;
            best = static_cast<int>(k);
        }
    }
    return {best, best_mag};
}

DechirpResult dechirp_decode(const IqBuffer& sym, int sf) {
    ChirpConfig base{sf, sym.fs, sym.fs, 0};
    if (sym.size() != static_cast<size_t>(1) << sf)
        throw ShapeError("dechirp: expected 2^sf samples at chip rate");
    return dechirp_decode_with(sym, gen_chirp(base, false));
}

IqBuffer decimate_to_chiprate(const IqBuffer& sig, double bw) {
    const double ratio = sig.fs / bw;
    const int os = static_cast<int>(std::lround(ratio));
    if (os < 1 || std::abs(ratio - os) > 1e-9)
        throw ConfigError("decimate: fs must be an integer multiple of bw");
    if (os == 1) return sig;

    // 64-tap Hamming windowed-sinc, cutoff bw/2, unity DC gain
    constexpr int kTaps = 64;
    const double fc = 0.5 / os;  // normalized to fs
    double taps[kTaps];
    double sum = 0.0;
    for (int k = 0; k < kTaps; ++k) {
        const double t = k - (kTaps - 1) / 2.0;
        const double x = 2.0 * M_PI * fc * t;
        const double sinc = (std::abs(x) < 1e-12) ? 1.0 : std::sin(x) / x;
        const double w = 0.54 - 0.46 * std::cos(2.0 * M_PI * k / (kTaps - 1));
        taps[k] = sinc * w;
        sum += taps[k];
    }
    for (double& t : taps) t /= sum;

    const int n = static_cast<int>(sig.size());
    const int delay = kTaps / 2;
    IqBuffer out;
    out.fs = bw;
    out.samples.reserve(n / os);
    for (int m = 0; m * os < n; ++m) {
        const int center = m * os + delay;
        cplx acc(0.0, 0.0);
        for (int k = 0; k < kTaps; ++k) {
            const int idx = center - k;
            if (idx >= 0 && idx < n) acc += taps[k] * sig.samples[idx];
        }
        out.samples.push_back(acc);
    }
    return out;
}

} // namespace morph
