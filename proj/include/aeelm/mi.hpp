#pragma once

#include "aeelm/dataset.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace aeelm {

// Histogram plug-in estimate of I(X;Y) in nats, with the marginal and joint
// entropies taken from the same equal-width grid. normalized_mi is
// raw_mi / sqrt(H(X) H(Y)), bounded by 1 and comparable to a correlation
// coefficient; selection thresholds apply to it, raw nats are reported
// alongside.
struct MiEstimate {
    double raw_mi = 0.0;
    double normalized_mi = 0.0;
    double entropy_x = 0.0;
    double entropy_y = 0.0;
    double joint_entropy = 0.0;
    std::size_t bin_count = 0;
};

struct FeatureSelection {
    // every channel, ordered by descending normalized_mi (name breaks ties)
    std::vector<std::pair<std::string, MiEstimate>> scores;
    double threshold = 0.6;
    std::vector<std::string> selected; // strictly above threshold, same order
};

// ceil(sqrt(n)), the default histogram resolution
std::size_t default_bins(std::size_t n);

// Entropy of x discretized into `bins` equal-width cells over [min, max].
// Constant input has a single occupied cell and entropy 0.
double entropy(std::span<const double> x, std::size_t bins);

MiEstimate mutual_information(std::span<const double> x, std::span<const double> y,
                              std::size_t bins);

// Scores every channel against the target at lag 0. bins == 0 selects the
// default resolution for the dataset length.
FeatureSelection select_features(const TimeSeriesDataset& ds, double threshold,
                                 std::size_t bins = 0);

} // namespace aeelm
