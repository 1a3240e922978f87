#pragma once

#include "aeelm/mi.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace aeelm {

// Per-channel result of the delay scan: the argmax of normalized MI over
// candidate delays 0..d_max (smallest delay on ties) plus the full curve.
struct DelayScan {
    std::size_t delay = 0;
    std::vector<MiEstimate> curve; // indexed by candidate delay
};

struct DelayTable {
    std::vector<std::pair<std::string, DelayScan>> entries; // selection order
    std::size_t d_max = 10;

    bool has(const std::string& name) const;
    const DelayScan& at(const std::string& name) const;
};

// Reconstructed input matrix: row k (k = d_max .. n-1) holds
// [x_1(k - d_1), ..., x_p(k - d_p)] with the target aligned at y(k).
struct LaggedMatrix {
    Matrix x;
    Vec y;
    std::vector<std::string> columns;
    std::size_t d_max = 0;
    std::size_t first_row = 0; // original sample index of row 0 (= d_max)
};

// Every candidate delay is evaluated on the same fixed window k in [d_max, n)
// so the MI estimates are comparable across candidates.
DelayScan scan_delay(std::span<const double> x, std::span<const double> y, std::size_t d_max,
                     std::size_t bins);

DelayTable scan_delays(const TimeSeriesDataset& ds, const std::vector<std::string>& channels,
                       std::size_t d_max, std::size_t bins = 0);

LaggedMatrix build_lagged_matrix(const TimeSeriesDataset& ds, const std::vector<std::string>& channels,
                                 const DelayTable& delays);

} // namespace aeelm
