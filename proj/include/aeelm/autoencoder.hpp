#pragma once

#include "aeelm/core/matrix.hpp"
#include "aeelm/elm.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace aeelm {

// Single-hidden-layer undercomplete autoencoder, sigmoid on both layers,
// trained by full-batch gradient descent with classical momentum on the mean
// squared reconstruction error. The bottleneck activations h are the features
// handed downstream (h is the only vector with the reduced dimension; see the
// README on the encoder-output choice).
struct AutoencoderModel {
    std::size_t input_dim = 0;
    std::size_t hidden_dim = 0;
    Matrix w1; // hidden_dim x input_dim
    Vec b1;    // hidden_dim
    Matrix w2; // input_dim x hidden_dim
    Vec b2;    // input_dim
};

struct AeHyper {
    double learning_rate = 0.5;
    double momentum = 0.9;
    std::size_t max_epochs = 2000;
    double tol = 1e-8; // |delta loss| below tol for 10 consecutive epochs stops
};

struct TrainingHistory {
    Vec losses; // loss at the start of each epoch, before that epoch's update
    std::size_t epochs_run = 0;
    double final_loss = 0.0; // loss of the returned (best) parameters
};

struct AeGradient {
    Matrix w1, w2;
    Vec b1, b2;
};

// Glorot-uniform weights (+-sqrt(6/(fan_in+fan_out))), zero biases.
AutoencoderModel ae_init(std::size_t input_dim, std::size_t hidden_dim, std::uint64_t seed);

Vec encode(const AutoencoderModel& m, std::span<const double> x);
Matrix encode(const AutoencoderModel& m, const Matrix& x);
Vec decode(const AutoencoderModel& m, std::span<const double> h);

// mean over rows of || decode(encode(x)) - x ||^2
double ae_loss(const AutoencoderModel& m, const Matrix& x);

// exact analytic gradient of ae_loss
AeGradient ae_gradient(const AutoencoderModel& m, const Matrix& x);

// Full-batch descent; returns the best-loss parameters seen. Throws
// NumericError (naming the epoch) if the loss diverges.
std::pair<AutoencoderModel, TrainingHistory> ae_train(const AutoencoderModel& m, const Matrix& x,
                                                      const AeHyper& hyper);

struct HiddenSearchResult {
    std::size_t best_hidden = 0;
    std::vector<std::pair<std::size_t, double>> mape_per_candidate;
};

// For each candidate size: train an AE on the chronological 80% of the rows,
// train the downstream ELM on the encoded features, record validation MAPE on
// the remaining 20%. Lowest MAPE wins, smallest candidate on ties.
HiddenSearchResult search_hidden_size(const Matrix& x, const Vec& y,
                                      const std::vector<std::size_t>& candidates,
                                      const ElmConfig& elm_cfg, const AeHyper& hyper,
                                      std::uint64_t seed);

void save_autoencoder_json(const AutoencoderModel& m, const std::string& path);
AutoencoderModel load_autoencoder_json(const std::string& path);
void write_history_csv(const TrainingHistory& hist, const std::string& path);

} // namespace aeelm
