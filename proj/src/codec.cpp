#include "morph/codec.hpp"

#include <algorithm>
#include <cmath>

#include "morph/fft.hpp"

namespace morph {

void MorphFrameSpec::validate() const {
    for (int i = 0; i < 3; ++i)
        if (sf_set[i + 1] != sf_set[i] + 1)
            throw ConfigError("sf_set must be four consecutive spreading factors");
    if (sf_set[0] < 7 || sf_max() > 12)
        throw ConfigError("sf_set must lie within [7,12]");
    if (bw <= 0) throw ConfigError("bw must be positive");
    if (preamble_len < 1) throw ConfigError("preamble_len must be >= 1");
    if (payload_symbols < 0) throw ConfigError("payload_symbols must be >= 0");
}

std::vector<int> pack_bits2(const std::vector<uint8_t>& bits) {
    if (bits.size() % 2 != 0)
        throw ConfigError("bit count must be even (2 bits per symbol)");
    std::vector<int> out;
    out.reserve(bits.size() / 2);
    for (size_t i = 0; i < bits.size(); i += 2) {
        if (bits[i] > 1 || bits[i + 1] > 1) throw ConfigError("bits must be 0/1");
        out.push_back(bits[i] | (bits[i + 1] << 1));  // LSB first
    }
    return out;
}

IqBuffer morph_payload_symbol(int bits2, const MorphFrameSpec& spec) {
    spec.validate();
    if (bits2 < 0 || bits2 > 3) throw ConfigError("bits2 must be in [0,3]");
    const int sf = spec.sf_for(bits2);
    const int hops = spec.hop_period(bits2);
    const IqBuffer chirp = gen_chirp({sf, spec.bw, spec.bw, 0}, true);

    IqBuffer out;
    out.fs = spec.bw;
    out.samples.reserve(static_cast<size_t>(spec.symbol_samples()));
    for (int h = 0; h < hops; ++h)
        out.samples.insert(out.samples.end(), chirp.samples.begin(), chirp.samples.end());
    return out;
}

IqBuffer morph_encode(const std::vector<uint8_t>& bits, const MorphFrameSpec& spec) {
    spec.validate();
    const std::vector<int> symbols = pack_bits2(bits);
    if (static_cast<int>(symbols.size()) != spec.payload_symbols)
        throw ConfigError("bit count does not match payload_symbols");

    const IqBuffer up = gen_chirp({spec.sf_max(), spec.bw, spec.bw, 0}, true);
    const IqBuffer down = gen_chirp({spec.sf_max(), spec.bw, spec.bw, 0}, false);

    IqBuffer out;
    out.fs = spec.bw;
    out.samples.reserve(static_cast<size_t>(spec.frame_samples()));
    for (int i = 0; i < spec.preamble_len; ++i)
        out.samples.insert(out.samples.end(), up.samples.begin(), up.samples.end());
    for (int i = 0; i < 2; ++i)  // SFD
        out.samples.insert(out.samples.end(), down.samples.begin(), down.samples.end());
    for (int v : symbols) {
        const IqBuffer sym = morph_payload_symbol(v, spec);
        out.samples.insert(out.samples.end(), sym.samples.begin(), sym.samples.end());
    }
    return out;
}

CorScores cor_scores(const IqBuffer& sym, const MorphFrameSpec& spec, CorMode mode) {
    spec.validate();
    const size_t n = static_cast<size_t>(spec.symbol_samples());
    if (sym.size() != n) throw ShapeError("cor: expected 2^sf_max samples");

    CorScores res;
    double best = -1.0;
    for (int cand = 0; cand < 4; ++cand) {
        const int sf = spec.sf_for(cand);
        const size_t win = static_cast<size_t>(1) << sf;
        const size_t k = n / win;
        const IqBuffer down = gen_chirp({sf, spec.bw, spec.bw, 0}, false);

        double bin0 = 0.0, total = 0.0;
        if (mode == CorMode::coherent) {
            std::vector<cplx> acc(win, cplx(0.0, 0.0));
            for (size_t w = 0; w < k; ++w)
                for (size_t i = 0; i < win; ++i)
                    acc[i] += sym.samples[w * win + i] * down.samples[i];
            fft_inplace(acc);
            bin0 = std::norm(acc[0]);
            for (const auto& x : acc) total += std::norm(x);
        } else {
            std::vector<cplx> work(win);
            for (size_t w = 0; w < k; ++w) {
                for (size_t i = 0; i < win; ++i)
                    work[i] = sym.samples[w * win + i] * down.samples[i];
                fft_inplace(work);
                bin0 += std::norm(work[0]);
                for (const auto& x : work) total += std::norm(x);
            }
        }
        res.score[cand] = (total > 0.0) ? bin0 / total : 0.0;
        if (res.score[cand] > best) {
            best = res.score[cand];
            res.best = cand;
        }
    }
    return res;
}

int cor_decode(const IqBuffer& sym, const MorphFrameSpec& spec, CorMode mode) {
    return cor_scores(sym, spec, mode).best;
}

IqBuffer ostinato_encode(int value, int repeats, double bw) {
    if (repeats != 2 && repeats != 4 && repeats != 8)
        throw ConfigError("ostinato: repeats must be 2, 4 or 8");
    if (value < 0 || value >= 4096) throw ConfigError("ostinato: value out of [0,4096)");
    const IqBuffer chirp = gen_chirp({12, bw, bw, value}, true);
    IqBuffer out;
    out.fs = bw;
    out.samples.reserve(chirp.size() * repeats);
    for (int r = 0; r < repeats; ++r)
        out.samples.insert(out.samples.end(), chirp.samples.begin(), chirp.samples.end());
    return out;
}

DechirpResult ostinato_decode(const IqBuffer& sym, int repeats) {
    if (repeats != 2 && repeats != 4 && repeats != 8)
        throw ConfigError("ostinato: repeats must be 2, 4 or 8");
    const size_t win = 4096;
    if (sym.size() != win * static_cast<size_t>(repeats))
        throw ShapeError("ostinato: expected repeats*4096 samples");

    IqBuffer acc;
    acc.fs = sym.fs;
    acc.samples.assign(win, cplx(0.0, 0.0));
    for (int r = 0; r < repeats; ++r)
        for (size_t i = 0; i < win; ++i)
            acc.samples[i] += sym.samples[static_cast<size_t>(r) * win + i];
    return dechirp_decode(acc, 12);
}

int ifo2_symbol_value(int bits2, int sf) {
    if (sf < 10 || sf > 12) throw ConfigError("ifo2: sf must be 10, 11 or 12");
    if (bits2 < 0 || bits2 > 3) throw ConfigError("ifo2: bits2 must be in [0,3]");
    // offsets -bw/2, -bw/4, 0, +bw/4 -> values {0, N/4, N/2, 3N/4}
    return bits2 * ((1 << sf) / 4);
}

IqBuffer ifo2_encode(int bits2, int sf, double bw) {
    return gen_chirp({sf, bw, bw, ifo2_symbol_value(bits2, sf)}, true);
}

int ifo2_decode_classical(const IqBuffer& sym, int sf) {
    const int n = 1 << sf;
    const int bin = dechirp_decode(sym, sf).value;
    int best = 0, best_d = n;
    for (int c = 0; c < 4; ++c) {
        const int code = c * (n / 4);
        const int d = std::min((bin - code + n) % n, (code - bin + n) % n);
        if (d < best_d) {  // strictly closer; ties keep the lower code index
            best_d = d;
            best = c;
        }
    }
    return best;
}

} // namespace morph
