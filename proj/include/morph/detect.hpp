#pragma once

#include <vector>

#include "morph/codec.hpp"
#include "morph/types.hpp"

namespace morph {

struct DetectionResult {
    bool found = false;
    size_t start_index = 0;  // first sample of the first preamble chirp
    double peak_corr = 0.0;
    double threshold = 0.0;
};

// Preamble search at extremely low SNR. All available symbol-length segments
// (at least N) are superposed at every alignment within one symbol period,
// then the superposition is correlated against one clean base up-chirp.
// Decision rule: peak > mean + 6*stddev of the correlation population with
// the top 1% excluded from the statistics.
DetectionResult detect_preamble(const IqBuffer& stream, int sf_max, int preamble_len);

// Slice payload_symbols windows after preamble + SFD.
std::vector<IqBuffer> extract_symbols(const IqBuffer& stream, const DetectionResult& det,
                                      const MorphFrameSpec& spec);

} // namespace morph
