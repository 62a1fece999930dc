#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace morph {

using cplx = std::complex<double>;

// Complex baseband samples with their sample rate.
struct IqBuffer {
    std::vector<cplx> samples;
    double fs = 0.0;

    IqBuffer() = default;
    IqBuffer(std::vector<cplx> s, double sample_rate)
        : samples(std::move(s)), fs(sample_rate) {}

    size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
    cplx& operator[](size_t i) { return samples[i]; }
    const cplx& operator[](size_t i) const { return samples[i]; }
};

// Error taxonomy; the CLI maps these onto exit codes.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ShapeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// Thrown when a requested SNR-threshold crossing is not inside the swept grid.
struct RangeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DatasetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace morph
