#pragma once

#include "aeelm/autoencoder.hpp"
#include "aeelm/core/matrix.hpp"

#include <cstdint>
#include <string>

namespace aeelm {

// Comparison regressors. All three expose the same predict contract as the
// ELM so the pipeline treats models uniformly.

struct MlrModel {
    Vec coefficients;
    double intercept = 0.0;
};

// Sigmoid hidden layer with a linear scalar head, trained by the same
// momentum descent as the autoencoder. Targets are standardized internally
// (y_mean/y_std recorded in the model) so the default step sizes work on
// physical-scale targets.
struct BpModel {
    std::size_t input_dim = 0;
    std::size_t hidden_dim = 0;
    Matrix w1; // hidden_dim x input_dim
    Vec b1;    // hidden_dim
    Vec w2;    // hidden_dim (linear head)
    double b2 = 0.0;
    double y_mean = 0.0;
    double y_std = 1.0;
};

struct RbfModel {
    Matrix centers; // c x p
    double sigma = 1.0;
    Vec weights; // c
    double intercept = 0.0;
    Vec kmeans_objective; // per-iteration objective, diagnostics only
};

// Ordinary least squares (minimum-norm on rank deficiency). Requires N > p.
MlrModel train_mlr(const Matrix& z, const Vec& y);
Vec mlr_predict(const MlrModel& m, const Matrix& z);

BpModel train_bp(const Matrix& z, const Vec& y, std::size_t hidden, const AeHyper& hyper,
                 std::uint64_t seed);
Vec bp_predict(const BpModel& m, const Matrix& z);
// exposed for the finite-difference check
double bp_loss(const BpModel& m, const Matrix& z, const Vec& y_std_units);
struct BpGradient {
    Matrix w1;
    Vec b1, w2;
    double b2 = 0.0;
};
BpGradient bp_gradient(const BpModel& m, const Matrix& z, const Vec& y_std_units);

// Centers by seeded k-means over distinct rows, width = median pairwise
// center distance (floor 1e-3), output weights by least squares.
RbfModel train_rbf(const Matrix& z, const Vec& y, std::size_t centers, std::uint64_t seed);
Vec rbf_predict(const RbfModel& m, const Matrix& z);

void save_mlr_json(const MlrModel& m, const std::string& path);
MlrModel load_mlr_json(const std::string& path);
void save_bp_json(const BpModel& m, const std::string& path);
BpModel load_bp_json(const std::string& path);
void save_rbf_json(const RbfModel& m, const std::string& path);
RbfModel load_rbf_json(const std::string& path);

} // namespace aeelm
