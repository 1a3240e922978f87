#pragma once

#include "aeelm/core/matrix.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace aeelm {

struct Channel {
    std::string name;
    std::string unit;
    Vec values;
};

// Named, uniformly sampled channels plus the target series. Rows are assumed
// contiguous in time at a fixed sampling interval (1 min by default); see the
// README for why gaps are out of scope.
struct TimeSeriesDataset {
    std::vector<Channel> channels;
    Channel target;
    std::vector<std::string> timestamps; // optional, empty when absent
    double sample_interval_minutes = 1.0;

    std::size_t n_samples() const { return target.values.size(); }
    bool has_channel(const std::string& name) const;
    const Channel& channel(const std::string& name) const;
    std::vector<std::string> channel_names() const;

    // Enforces the structural invariants: equal lengths >= 2, unique nonempty
    // channel names, all values finite. Throws DataError.
    void validate() const;
};

struct NormalizationParams {
    struct Range {
        double lo = 0.0;
        double hi = 1.0;
    };
    std::map<std::string, Range> ranges;
};

struct SplitSpec {
    std::size_t train_count = 0;
    std::size_t test_count = 0;
};

// Physical channel dictionary: name, unit, lower and upper operating limit.
struct ChannelInfo {
    std::string name;
    std::string unit;
    double lo;
    double hi;
};

// The canonical 23-channel schema (secondary/primary airflows, coal feed
// rates, steam pressure/temperature, O2, total air volume) plus NOx target.
const std::vector<ChannelInfo>& plant_schema();
const ChannelInfo& plant_target_info();

TimeSeriesDataset load_csv(const std::string& path, const std::string& target_name);
void write_csv(const TimeSeriesDataset& ds, const std::string& path);

// Records per-channel min/max; call on training rows only. Throws DataError
// on a constant channel.
NormalizationParams fit_minmax(const TimeSeriesDataset& ds);

// Maps each value to (v - lo)/(hi - lo); out-of-range values clip to [0, 1].
// Returns the normalized dataset and the number of clipped values.
std::pair<TimeSeriesDataset, std::size_t> apply_minmax(const TimeSeriesDataset& ds,
                                                       const NormalizationParams& params);

// Inverse of apply_minmax on in-range values.
TimeSeriesDataset invert_minmax(const TimeSeriesDataset& ds, const NormalizationParams& params);

std::pair<TimeSeriesDataset, TimeSeriesDataset> split_chronological(const TimeSeriesDataset& ds,
                                                                    const SplitSpec& spec);

} // namespace aeelm
