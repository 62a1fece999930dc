#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "morph/neural/net.hpp"
#include "morph/types.hpp"

namespace morph::neural {

// One labeled capture: a clean symbol window and its 2-bit class.
struct LabeledIq {
    IqBuffer iq;
    int label = 0;
    int sf = 0;
};

struct Dataset {
    std::vector<LabeledIq> records;
    std::string scheme;           // "morph" | "ifo2"
    std::array<int, 4> sf_set{};  // morph sf set, or {sf,sf,sf,sf} for ifo2
    double bw = 125000.0;
    double fs = 125000.0;
    uint64_t seed = 0;
};

struct TrainConfig {
    int epochs = 30;
    int batch = 64;
    double lr = 1e-3;
    uint64_t seed = 1;
    int aug_per_capture = 60;   // fresh augmentations per capture per epoch
    double val_fraction = 0.2;  // clean captures held out per class
    // SNR curriculum: a short easy bootstrap stage, then the decision band.
    double boot_fraction = 0.2;
    double boot_snr_lo = -18.0, boot_snr_hi = -6.0;
    double band_snr_lo = -26.0, band_snr_hi = -12.0;
    // learning-rate steps at these epoch fractions
    double lr_step1 = 0.55, lr_step2 = 0.85;
    double lr_decay = 0.3;
    int n_threads = 0;          // 0 = hardware concurrency
    bool verbose = false;
};

struct TrainResult {
    Net<float> net;
    double final_loss = 0.0;        // mean per-sample loss of the last epoch
    double clean_val_accuracy = 0.0;
    double train_accuracy = 0.0;    // on the last epoch's augmented batches
    std::vector<double> epoch_losses;
};

TrainResult train(const Dataset& data, const ModelSpec& spec, const TrainConfig& cfg);

// Zero all but the keep_fraction largest-|w| weights of every dense layer.
void prune_dense(Net<float>& net, double keep_fraction);

long count_dense_nonzeros(Net<float>& net);

// Max relative error between analytic and central-difference gradients on a
// random batch. Run on a reduced double-precision model.
double grad_check(const ModelSpec& small_spec, uint64_t seed, int batch_size = 2);

} // namespace morph::neural
