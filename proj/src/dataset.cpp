#include "aeelm/dataset.hpp"

#include "aeelm/core/csv.hpp"
#include "aeelm/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>

namespace aeelm {

namespace {

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* begin = s.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    return end == begin + s.size();
}

} // namespace

bool TimeSeriesDataset::has_channel(const std::string& name) const {
    for (const auto& c : channels)
        if (c.name == name) return true;
    return false;
}

const Channel& TimeSeriesDataset::channel(const std::string& name) const {
    for (const auto& c : channels)
        if (c.name == name) return c;
    throw DataError("no such channel: " + name);
}

std::vector<std::string> TimeSeriesDataset::channel_names() const {
    std::vector<std::string> names;
    names.reserve(channels.size());
    for (const auto& c : channels) names.push_back(c.name);
    return names;
}

void TimeSeriesDataset::validate() const {
    const std::size_t n = target.values.size();
    if (n < 2) throw DataError("dataset must have at least 2 samples");
    std::set<std::string> seen;
    for (const auto& c : channels) {
        if (c.name.empty()) throw DataError("empty channel name");
        if (!seen.insert(c.name).second) throw DataError("duplicate channel name: " + c.name);
        if (c.values.size() != n)
            throw DataError("channel " + c.name + " has " + std::to_string(c.values.size()) +
                            " samples, target has " + std::to_string(n));
        for (double v : c.values)
            if (!std::isfinite(v)) throw DataError("non-finite value in channel " + c.name);
    }
    for (double v : target.values)
        if (!std::isfinite(v)) throw DataError("non-finite value in target " + target.name);
    if (!timestamps.empty() && timestamps.size() != n)
        throw DataError("timestamp column length mismatch");
}

const std::vector<ChannelInfo>& plant_schema() {
    static const std::vector<ChannelInfo> schema = {
        {"S_AA", "m/s", 72.78, 130.38},  {"S_AB", "m/s", 88.64, 182.50},
        {"S_BC", "m/s", 101.25, 102.75}, {"S_CD", "m/s", 59.66, 152.15},
        {"S_DE", "m/s", 144.10, 261.59}, {"S_EF", "m/s", 138.60, 234.92},
        {"P_A", "m/s", 41.30, 57.36},    {"P_B", "m/s", 41.42, 57.23},
        {"P_C", "m/s", 41.54, 57.17},    {"P_D", "m/s", 41.97, 56.69},
        {"P_E", "m/s", 42.03, 56.56},    {"P_F", "m/s", 42.16, 56.69},
        {"F1", "t/h", 139.07, 163.38},   {"F2", "t/h", 120.28, 158.16},
        {"F3", "t/h", 127.26, 162.20},   {"F4", "t/h", 115.15, 150.79},
        {"F5", "t/h", 123.75, 172.97},   {"F6", "t/h", 115.39, 150.13},
        {"T_C", "t/h", 232.74, 382.48},  {"P", "MPa", 21.94, 32.09},
        {"T", "degC", 579.16, 612.12},   {"O2", "%", 1.65, 5.38},
        {"TV", "t/h", 2257.22, 3789.66},
    };
    return schema;
}

const ChannelInfo& plant_target_info() {
    static const ChannelInfo info = {"NOx", "mg/m3", 50.0, 600.0};
    return info;
}

TimeSeriesDataset load_csv(const std::string& path, const std::string& target_name) {
    const csv::Table table = csv::read_file(path);
    if (table.header.empty()) throw DataError("CSV has no header: " + path);

    std::size_t first_data_col = 0;
    const bool has_timestamp = table.header[0] == "timestamp";
    if (has_timestamp) first_data_col = 1;

    std::size_t target_col = table.header.size();
    for (std::size_t c = first_data_col; c < table.header.size(); ++c)
        if (table.header[c] == target_name) target_col = c;
    if (target_col == table.header.size())
        throw DataError("target column '" + target_name + "' not found in " + path);

    if (table.rows.size() < 2) throw DataError("CSV needs at least 2 data rows: " + path);

    TimeSeriesDataset ds;
    ds.target.name = target_name;
    for (std::size_t c = first_data_col; c < table.header.size(); ++c) {
        if (c == target_col) continue;
        ds.channels.push_back({table.header[c], "", {}});
    }

    const std::size_t ncols = table.header.size();
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        if (row.size() != ncols)
            throw DataError("ragged CSV row " + std::to_string(r + 2) + ": expected " +
                            std::to_string(ncols) + " fields, got " + std::to_string(row.size()));
        if (has_timestamp) ds.timestamps.push_back(row[0]);
        std::size_t ch = 0;
        for (std::size_t c = first_data_col; c < ncols; ++c) {
            double v = 0.0;
            if (!parse_double(row[c], v))
                throw DataError("non-numeric cell at row " + std::to_string(r + 2) + ", column '" +
                                table.header[c] + "': '" + row[c] + "'");
            if (c == target_col)
                ds.target.values.push_back(v);
            else
                ds.channels[ch++].values.push_back(v);
        }
    }
    ds.validate();
    return ds;
}

void write_csv(const TimeSeriesDataset& ds, const std::string& path) {
    std::vector<std::string> header;
    if (!ds.timestamps.empty()) header.push_back("timestamp");
    for (const auto& c : ds.channels) header.push_back(c.name);
    header.push_back(ds.target.name);

    std::vector<std::vector<std::string>> rows;
    rows.reserve(ds.n_samples());
    for (std::size_t k = 0; k < ds.n_samples(); ++k) {
        std::vector<std::string> row;
        row.reserve(header.size());
        if (!ds.timestamps.empty()) row.push_back(ds.timestamps[k]);
        for (const auto& c : ds.channels) row.push_back(csv::format_double(c.values[k]));
        row.push_back(csv::format_double(ds.target.values[k]));
        rows.push_back(std::move(row));
    }
    csv::write_file(path, header, rows);
}

NormalizationParams fit_minmax(const TimeSeriesDataset& ds) {
    NormalizationParams params;
    for (const auto& c : ds.channels) {
        const auto [lo, hi] = std::minmax_element(c.values.begin(), c.values.end());
        if (*lo == *hi)
            throw DataError("constant channel '" + c.name + "' has zero range; remove it or fix the data");
        params.ranges[c.name] = {*lo, *hi};
    }
    return params;
}

std::pair<TimeSeriesDataset, std::size_t> apply_minmax(const TimeSeriesDataset& ds,
                                                       const NormalizationParams& params) {
    TimeSeriesDataset out = ds;
    std::size_t clipped = 0;
    for (auto& c : out.channels) {
        auto it = params.ranges.find(c.name);
        if (it == params.ranges.end())
            throw DataError("no normalization range recorded for channel: " + c.name);
        const double lo = it->second.lo;
        const double inv = 1.0 / (it->second.hi - it->second.lo);
        for (double& v : c.values) {
            v = (v - lo) * inv;
            if (v < 0.0) {
                v = 0.0;
                ++clipped;
            } else if (v > 1.0) {
                v = 1.0;
                ++clipped;
            }
        }
    }
    return {std::move(out), clipped};
}

TimeSeriesDataset invert_minmax(const TimeSeriesDataset& ds, const NormalizationParams& params) {
    TimeSeriesDataset out = ds;
    for (auto& c : out.channels) {
        auto it = params.ranges.find(c.name);
        if (it == params.ranges.end())
            throw DataError("no normalization range recorded for channel: " + c.name);
        for (double& v : c.values) v = it->second.lo + v * (it->second.hi - it->second.lo);
    }
    return out;
}

std::pair<TimeSeriesDataset, TimeSeriesDataset> split_chronological(const TimeSeriesDataset& ds,
                                                                    const SplitSpec& spec) {
    if (spec.train_count == 0 || spec.test_count == 0)
        throw DataError("split counts must both be positive");
    if (spec.train_count + spec.test_count != ds.n_samples())
        throw DataError("split counts " + std::to_string(spec.train_count) + "+" +
                        std::to_string(spec.test_count) + " do not sum to n_samples=" +
                        std::to_string(ds.n_samples()));

    auto slice = [&](std::size_t begin, std::size_t end) {
        TimeSeriesDataset part;
        part.sample_interval_minutes = ds.sample_interval_minutes;
        part.target.name = ds.target.name;
        part.target.unit = ds.target.unit;
        part.target.values.assign(ds.target.values.begin() + begin, ds.target.values.begin() + end);
        for (const auto& c : ds.channels)
            part.channels.push_back({c.name, c.unit, Vec(c.values.begin() + begin, c.values.begin() + end)});
        if (!ds.timestamps.empty())
            part.timestamps.assign(ds.timestamps.begin() + begin, ds.timestamps.begin() + end);
        return part;
    };
    return {slice(0, spec.train_count), slice(spec.train_count, ds.n_samples())};
}

} // namespace aeelm
