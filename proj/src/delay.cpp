#include "aeelm/delay.hpp"

#include "aeelm/core/errors.hpp"

#include <cmath>

namespace aeelm {

bool DelayTable::has(const std::string& name) const {
    for (const auto& [n, s] : entries)
        if (n == name) return true;
    return false;
}

const DelayScan& DelayTable::at(const std::string& name) const {
    for (const auto& [n, s] : entries)
        if (n == name) return s;
    throw DataError("no delay entry for channel: " + name);
}

DelayScan scan_delay(std::span<const double> x, std::span<const double> y, std::size_t d_max,
                     std::size_t bins) {
    if (x.size() != y.size()) throw std::invalid_argument("scan_delay: length mismatch");
    if (x.size() <= d_max + 1)
        throw DataError("scan_delay: series length " + std::to_string(x.size()) +
                        " too short for d_max=" + std::to_string(d_max));
    const std::size_t n = x.size();
    const std::size_t window = n - d_max;
    if (bins == 0) bins = default_bins(window);

    DelayScan scan;
    scan.curve.reserve(d_max + 1);
    for (std::size_t d = 0; d <= d_max; ++d) {
        const auto xd = x.subspan(d_max - d, window);
        const auto yd = y.subspan(d_max, window);
        scan.curve.push_back(mutual_information(xd, yd, bins));
        if (scan.curve[d].normalized_mi > scan.curve[scan.delay].normalized_mi) scan.delay = d;
    }
    return scan;
}

DelayTable scan_delays(const TimeSeriesDataset& ds, const std::vector<std::string>& channels,
                       std::size_t d_max, std::size_t bins) {
    DelayTable table;
    table.d_max = d_max;
    for (const auto& name : channels)
        table.entries.emplace_back(name,
                                   scan_delay(ds.channel(name).values, ds.target.values, d_max, bins));
    return table;
}

LaggedMatrix build_lagged_matrix(const TimeSeriesDataset& ds, const std::vector<std::string>& channels,
                                 const DelayTable& delays) {
    const std::size_t n = ds.n_samples();
    const std::size_t d_max = delays.d_max;
    if (n <= d_max)
        throw DataError("build_lagged_matrix: need more than d_max=" + std::to_string(d_max) +
                        " samples, got " + std::to_string(n));

    LaggedMatrix lm;
    lm.columns = channels;
    lm.d_max = d_max;
    lm.first_row = d_max;
    lm.x = Matrix(n - d_max, channels.size());
    lm.y.assign(ds.target.values.begin() + static_cast<std::ptrdiff_t>(d_max), ds.target.values.end());

    for (std::size_t c = 0; c < channels.size(); ++c) {
        const auto& scan = delays.at(channels[c]); // throws if missing
        if (scan.delay > d_max)
            throw DataError("delay " + std::to_string(scan.delay) + " for channel " + channels[c] +
                            " exceeds d_max");
        const Vec& values = ds.channel(channels[c]).values;
        for (std::size_t k = d_max; k < n; ++k) lm.x(k - d_max, c) = values[k - scan.delay];
    }
    return lm;
}

} // namespace aeelm
