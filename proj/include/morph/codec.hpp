#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "morph/phy.hpp"
#include "morph/types.hpp"

namespace morph {

// Phase handling across hop boundaries. The generator produces chirps with
// zero net phase per period, so both modes emit identical waveforms; the flag
// is kept so the convention is explicit at call sites.
enum class PhaseMode { continuous, reset_per_hop };

// An SF-hopping frame: four consecutive SFs encode 2 bits per symbol, every
// symbol spanning one SF_max chirp period.
struct MorphFrameSpec {
    std::array<int, 4> sf_set{9, 10, 11, 12};  // ascending, consecutive
    double bw = 125000.0;
    int preamble_len = 8;
    int payload_symbols = 0;
    PhaseMode phase_mode = PhaseMode::continuous;

    int sf_max() const { return sf_set[3]; }
    int sf_for(int bits2) const { return sf_set[bits2]; }
    int hop_period(int bits2) const { return 1 << (sf_max() - sf_for(bits2)); }
    int symbol_samples() const { return 1 << sf_max(); }
    int frame_samples() const {
        return (preamble_len + 2 + payload_symbols) * symbol_samples();
    }
    void validate() const;
};

enum class CorMode { coherent, noncoherent };

struct CorScores {
    std::array<double, 4> score{};  // bin-0 energy share per candidate SF
    int best = 0;
};

// bits are 0/1, two per payload symbol, LSB first within each pair
std::vector<int> pack_bits2(const std::vector<uint8_t>& bits);

IqBuffer morph_encode(const std::vector<uint8_t>& bits, const MorphFrameSpec& spec);

// One payload symbol (hop_period consecutive base up-chirps at the selected SF)
IqBuffer morph_payload_symbol(int bits2, const MorphFrameSpec& spec);

CorScores cor_scores(const IqBuffer& sym, const MorphFrameSpec& spec, CorMode mode);
int cor_decode(const IqBuffer& sym, const MorphFrameSpec& spec,
               CorMode mode = CorMode::coherent);

// Ostinato: k repeated SF-12 chirps with one shared symbol value.
IqBuffer ostinato_encode(int value, int repeats, double bw = 125000.0);
DechirpResult ostinato_decode(const IqBuffer& sym, int repeats);

// IFO-2: one chirp whose initial frequency offset encodes 2 bits,
// offsets {-bw/2, -bw/4, 0, +bw/4}.
int ifo2_symbol_value(int bits2, int sf);
IqBuffer ifo2_encode(int bits2, int sf, double bw = 125000.0);
int ifo2_decode_classical(const IqBuffer& sym, int sf);

} // namespace morph
