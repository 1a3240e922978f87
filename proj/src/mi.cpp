#include "aeelm/mi.hpp"

#include "aeelm/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace aeelm {

namespace {

void check_series(std::span<const double> x, const char* what) {
    if (x.size() < 2) throw std::invalid_argument(std::string(what) + ": need at least 2 samples");
    for (double v : x)
        if (!std::isfinite(v)) throw DataError(std::string(what) + ": non-finite value");
}

struct Edges {
    double lo;
    double inv_width; // bins / (hi - lo); 0 for a constant series
};

Edges edges_of(std::span<const double> x, std::size_t bins) {
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    if (*lo == *hi) return {*lo, 0.0};
    return {*lo, static_cast<double>(bins) / (*hi - *lo)};
}

std::size_t bin_of(double v, const Edges& e, std::size_t bins) {
    if (e.inv_width == 0.0) return 0;
    const double r = (v - e.lo) * e.inv_width;
    auto idx = static_cast<std::size_t>(r);
    return idx >= bins ? bins - 1 : idx;
}

// -sum p ln p over ascending nonempty cells; identical evaluation order for
// identical count vectors, so swapped-argument calls match bit for bit.
double entropy_of_counts(const std::vector<std::uint64_t>& counts, double n) {
    double h = 0.0;
    for (std::uint64_t c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / n;
        h += -p * std::log(p);
    }
    return h;
}

} // namespace

std::size_t default_bins(std::size_t n) {
    return static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
}

double entropy(std::span<const double> x, std::size_t bins) {
    check_series(x, "entropy");
    if (bins < 1) throw std::invalid_argument("entropy: bins must be >= 1");
    const Edges e = edges_of(x, bins);
    std::vector<std::uint64_t> counts(bins, 0);
    for (double v : x) ++counts[bin_of(v, e, bins)];
    return entropy_of_counts(counts, static_cast<double>(x.size()));
}

MiEstimate mutual_information(std::span<const double> x, std::span<const double> y,
                              std::size_t bins) {
    if (x.size() != y.size()) throw std::invalid_argument("mutual_information: length mismatch");
    check_series(x, "mutual_information/x");
    check_series(y, "mutual_information/y");
    if (bins < 1) throw std::invalid_argument("mutual_information: bins must be >= 1");

    const std::size_t n = x.size();
    const Edges ex = edges_of(x, bins);
    const Edges ey = edges_of(y, bins);

    std::vector<std::uint64_t> joint(bins * bins, 0);
    for (std::size_t k = 0; k < n; ++k)
        ++joint[bin_of(x[k], ex, bins) * bins + bin_of(y[k], ey, bins)];

    std::vector<std::uint64_t> mx(bins, 0), my(bins, 0);
    for (std::size_t i = 0; i < bins; ++i)
        for (std::size_t j = 0; j < bins; ++j) {
            mx[i] += joint[i * bins + j];
            my[j] += joint[i * bins + j];
        }

    const auto dn = static_cast<double>(n);
    MiEstimate est;
    est.bin_count = bins;
    est.entropy_x = entropy_of_counts(mx, dn);
    est.entropy_y = entropy_of_counts(my, dn);

    // Cell terms are accumulated pairwise, (i,j) together with (j,i), so the
    // summation sequence is invariant under transposing the grid and
    // mutual_information(y, x) reproduces the exact same bits.
    auto joint_term = [&](std::size_t i, std::size_t j) {
        const std::uint64_t c = joint[i * bins + j];
        if (c == 0) return 0.0;
        const double p = static_cast<double>(c) / dn;
        return -p * std::log(p);
    };
    auto mi_term = [&](std::size_t i, std::size_t j) {
        const std::uint64_t c = joint[i * bins + j];
        if (c == 0) return 0.0;
        const double p = static_cast<double>(c) / dn;
        const double px = static_cast<double>(mx[i]) / dn;
        const double py = static_cast<double>(my[j]) / dn;
        return p * std::log(p / (px * py));
    };

    double hxy = 0.0, raw = 0.0;
    for (std::size_t i = 0; i < bins; ++i)
        for (std::size_t j = i + 1; j < bins; ++j) {
            hxy += joint_term(i, j) + joint_term(j, i);
            raw += mi_term(i, j) + mi_term(j, i);
        }
    for (std::size_t i = 0; i < bins; ++i) {
        hxy += joint_term(i, i);
        raw += mi_term(i, i);
    }
    est.joint_entropy = hxy;

    if (raw < -1e-9)
        throw NumericError("mutual information estimate " + std::to_string(raw) +
                           " below the rounding floor; estimator is broken");
    est.raw_mi = raw < 0.0 ? 0.0 : raw;
    est.normalized_mi = (est.entropy_x > 0.0 && est.entropy_y > 0.0)
                            ? est.raw_mi / std::sqrt(est.entropy_x * est.entropy_y)
                            : 0.0;
    return est;
}

FeatureSelection select_features(const TimeSeriesDataset& ds, double threshold, std::size_t bins) {
    if (!(threshold > 0.0 && threshold < 1.0))
        throw ConfigError("selection threshold must lie in (0, 1)");
    ds.validate();
    if (bins == 0) bins = default_bins(ds.n_samples());

    FeatureSelection sel;
    sel.threshold = threshold;
    for (const auto& c : ds.channels)
        sel.scores.emplace_back(c.name, mutual_information(c.values, ds.target.values, bins));

    std::stable_sort(sel.scores.begin(), sel.scores.end(), [](const auto& a, const auto& b) {
        if (a.second.normalized_mi != b.second.normalized_mi)
            return a.second.normalized_mi > b.second.normalized_mi;
        return a.first < b.first;
    });
    for (const auto& [name, est] : sel.scores)
        if (est.normalized_mi > threshold) sel.selected.push_back(name);
    return sel;
}

} // namespace aeelm
