#pragma once

#include "aeelm/dataset.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace aeelm {

// Synthetic 23-channel plant with known relevant channels, known per-channel
// delays and a known nonlinear target, used as ground truth for validating
// feature selection, delay scanning and the end-to-end pipeline.
//
// Channels are AR(1) processes squashed into each channel's physical operating
// range. With latent_dim == 0 every channel is independent; with
// latent_dim > 0 the relevant channels additionally share slowly drifting
// latent drivers (the load-following regime of a real plant, where every
// related measurement tracks the same underlying state and pairwise MI scores
// are high). Irrelevant channels never couple to the latents.
struct PlantSpec {
    std::size_t n_samples = 500;
    std::vector<std::pair<std::string, std::size_t>> relevant; // name -> true delay in samples
    double drive_smoothness = 0.9;  // AR(1) coefficient of per-channel drivers
    std::string target_fn = "saturating-mix";
    double noise_sigma = 0.01;
    bool noise_relative = true; // sigma as a fraction of the clean target's stddev
    std::uint64_t seed = 42;

    std::size_t latent_dim = 0;
    double latent_smoothness = 0.99;   // AR(1) coefficient of the latent velocity
    double latent_coupling = 0.99995;   // share of a relevant channel's drive stddev

    // Testing hook: re-seeds one channel's private stream without touching any
    // other stream.
    std::map<std::string, std::uint64_t> channel_salt;

    std::vector<std::string> irrelevant_names() const;
    std::size_t max_delay() const;
};

struct GroundTruth {
    std::vector<std::pair<std::string, std::size_t>> relevant;
    double noise_sigma_abs = 0.0;
};

// Deterministic given the spec; identical specs give bitwise-identical data.
std::pair<TimeSeriesDataset, GroundTruth> generate(const PlantSpec& spec);

// Recomputes the noiseless target from the generated channel values at the
// true lags, for rows k >= max true delay. With noise_sigma == 0 this
// reproduces ds.target exactly (same code path as the generator).
Vec reevaluate_target(const PlantSpec& spec, const TimeSeriesDataset& ds);

// The Table-2-style default fixture: 13 relevant channels at delays 6,6,6,5,
// 4,4,5,5,3,5,5,4,3 over a shared latent drive.
PlantSpec default_plant_spec(std::uint64_t seed);

void write_ground_truth_json(const GroundTruth& gt, const std::string& path);

} // namespace aeelm
