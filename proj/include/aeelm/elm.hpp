#pragma once

#include "aeelm/core/matrix.hpp"

#include <cstdint>
#include <span>
#include <string>

namespace aeelm {

// Extreme learning machine regressor: K sigmoid hidden neurons with random,
// fixed input weights; output weights solved in closed form as the
// minimum-norm least-squares solution (or the ridge solution for lambda > 0).
struct ElmModel {
    std::size_t k = 0;           // hidden neuron count
    std::size_t feature_dim = 0;
    Matrix w;                    // k x feature_dim, row i = input weights of neuron i
    Vec b;                       // k hidden biases
    Vec beta;                    // k output weights
    double ridge_lambda = 0.0;
    std::uint64_t seed = 0;
};

struct ElmConfig {
    std::size_t k = 100;
    double ridge_lambda = 1e-8; // conditioning floor; exact min-norm at 0
    std::vector<std::size_t> k_grid; // optional validation grid; empty = fixed k
};

// component i = sigmoid(w_i . z + b_i)
Vec hidden_map(const ElmModel& model, std::span<const double> z);

// W and b are drawn per neuron (all weights of neuron i, then its bias) so a
// model with K' > K hidden neurons from the same seed nests the K-model's
// neurons exactly.
ElmModel train_elm(const Matrix& z, const Vec& y, std::size_t k, std::uint64_t seed,
                   double ridge_lambda = 0.0);

Vec elm_predict(const ElmModel& model, const Matrix& z);

void save_elm_json(const ElmModel& model, const std::string& path);
ElmModel load_elm_json(const std::string& path);

} // namespace aeelm
