#include "morph/detect.hpp"

#include <algorithm>
#include <cmath>

#include "morph/fft.hpp"
#include "morph/phy.hpp"

namespace morph {

namespace {

// Trimmed mean/stddev fall below the Rayleigh-null values because the trim
// removes the top of the noise distribution, not just a signal peak. These
// factors restore the untrimmed null calibration for a 1% trim
// (mu_full/mu_trim and sd_full/sd_trim of the normalized-correlation null).
constexpr double kTrimMeanCorrection = 1.0171;
constexpr double kTrimStdCorrection = 1.0511;

} // namespace

DetectionResult detect_preamble(const IqBuffer& stream, int sf_max, int preamble_len) {
    if (sf_max < 7 || sf_max > 12) throw ConfigError("detect: sf_max must be in [7,12]");
    if (preamble_len < 1) throw ConfigError("detect: preamble_len must be >= 1");
    const size_t t_sym = static_cast<size_t>(1) << sf_max;
    const size_t n = stream.size();
    if (n < (static_cast<size_t>(preamble_len) + 1) * t_sym)
        throw ShapeError("detect: stream shorter than (N+1) symbol periods");

    // superpose all full segments available at every alignment in [0, t_sym)
    const size_t n_seg = n / t_sym - 1;
    std::vector<cplx> super(2 * t_sym, cplx(0.0, 0.0));
    for (size_t k = 0; k < n_seg; ++k) {
        const cplx* seg = stream.samples.data() + k * t_sym;
        for (size_t t = 0; t < 2 * t_sym; ++t) super[t] += seg[t];
    }

    const IqBuffer base = gen_chirp({sf_max, stream.fs, stream.fs, 0}, true);

    // corr[a] = <super[a..a+T), base> for a in [0, T], via circular correlation
    std::vector<cplx> f_super = super;
    fft_inplace(f_super);
    std::vector<cplx> f_base(2 * t_sym, cplx(0.0, 0.0));
    std::copy(base.samples.begin(), base.samples.end(), f_base.begin());
    fft_inplace(f_base);
    for (size_t i = 0; i < f_super.size(); ++i) f_super[i] *= std::conj(f_base[i]);
    ifft_inplace(f_super);

    std::vector<double> energy(2 * t_sym + 1, 0.0);
    for (size_t i = 0; i < 2 * t_sym; ++i) energy[i + 1] = energy[i] + std::norm(super[i]);

    const double base_norm = std::sqrt(static_cast<double>(t_sym));
    std::vector<double> corr(t_sym);
    for (size_t a = 0; a < t_sym; ++a) {
        const double win = std::sqrt(energy[a + t_sym] - energy[a]);
        corr[a] = (win > 0.0) ? std::abs(f_super[a]) / (win * base_norm) : 0.0;
    }

    // robust threshold: stats over the population minus its top 1%
    std::vector<double> sorted = corr;
    std::sort(sorted.begin(), sorted.end());
    const size_t trim = (t_sym + 99) / 100;
    const size_t keep = t_sym - trim;
    double mean = 0.0;
    for (size_t i = 0; i < keep; ++i) mean += sorted[i];
    mean /= static_cast<double>(keep);
    double var = 0.0;
    for (size_t i = 0; i < keep; ++i) var += (sorted[i] - mean) * (sorted[i] - mean);
    var /= static_cast<double>(keep);

    DetectionResult res;
    res.threshold = kTrimMeanCorrection * mean + 6.0 * kTrimStdCorrection * std::sqrt(var);

    size_t a_star = 0;
    for (size_t a = 1; a < t_sym; ++a)
        if (corr[a] > corr[a_star]) a_star = a;
    res.peak_corr = corr[a_star];
    res.found = res.peak_corr > res.threshold;

    // locate which segment starts the preamble: first per-segment correlation
    // reaching half of the strongest one
    const size_t n_at = (n - a_star) / t_sym;
    std::vector<double> seg_corr(n_at, 0.0);
    for (size_t k = 0; k < n_at; ++k) {
        cplx acc(0.0, 0.0);
        const cplx* seg = stream.samples.data() + a_star + k * t_sym;
        for (size_t t = 0; t < t_sym; ++t) acc += seg[t] * std::conj(base.samples[t]);
        seg_corr[k] = std::abs(acc);
    }
    const double seg_max = *std::max_element(seg_corr.begin(), seg_corr.end());
    size_t k_first = 0;
    for (size_t k = 0; k < n_at; ++k) {
        if (seg_corr[k] >= 0.5 * seg_max) {
            k_first = k;
            break;
        }
    }
    res.start_index = a_star + k_first * t_sym;
    return res;
}

std::vector<IqBuffer> extract_symbols(const IqBuffer& stream, const DetectionResult& det,
                                      const MorphFrameSpec& spec) {
    if (!det.found) throw ConfigError("extract_symbols: detection result has found=false");
    spec.validate();
    const size_t t_sym = static_cast<size_t>(spec.symbol_samples());
    const size_t payload_start =
        det.start_index + (static_cast<size_t>(spec.preamble_len) + 2) * t_sym;
    const size_t need = payload_start + static_cast<size_t>(spec.payload_symbols) * t_sym;
    if (need > stream.size())
        throw ShapeError("extract_symbols: stream truncated before declared payload");

    std::vector<IqBuffer> out;
    out.reserve(static_cast<size_t>(spec.payload_symbols));
    for (int i = 0; i < spec.payload_symbols; ++i) {
        IqBuffer sym;
        sym.fs = stream.fs;
        const auto begin = stream.samples.begin() + payload_start + i * t_sym;
        sym.samples.assign(begin, begin + t_sym);
        out.push_back(std::move(sym));
    }
    return out;
}

} // namespace morph
