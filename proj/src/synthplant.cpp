#include "aeelm/synthplant.hpp"

#include "aeelm/core/errors.hpp"
#include "aeelm/core/math.hpp"
#include "aeelm/core/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

namespace aeelm {

namespace {

constexpr std::size_t kWarmup = 10; // covers the largest admissible true delay

// seed stream ids (fixed; adding streams must never renumber existing ones)
constexpr std::uint64_t kChannelStream = 100; // +channel index
constexpr std::uint64_t kTargetFnStream = 200;
constexpr std::uint64_t kNoiseStream = 300;
constexpr std::uint64_t kLatentStream = 400; // +latent index
constexpr std::uint64_t kMixingStream = 500;

double squash01(double x) { return 0.5 * (1.0 + std::tanh(0.5 * x)); }

Vec ar1_series(Rng& rng, std::size_t n, double a) {
    Vec x(n);
    const double innovation = std::sqrt(1.0 - a * a);
    x[0] = rng.gaussian();
    for (std::size_t k = 1; k < n; ++k) x[k] = a * x[k - 1] + innovation * rng.gaussian();
    return x;
}

// Integrated AR(1) velocity, standardized over the window: a smooth ramping
// trajectory (think unit load) rather than a locally rough random walk.
Vec smooth_latent_series(Rng& rng, std::size_t n, double a) {
    Vec z(n);
    const double innovation = std::sqrt(1.0 - a * a);
    double v = rng.gaussian();
    z[0] = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        v = a * v + innovation * rng.gaussian();
        z[k] = z[k - 1] + v;
    }
    const double m = mean_of(z);
    double sd = stddev_of(z);
    if (sd == 0.0) sd = 1.0;
    for (double& value : z) value = (value - m) / sd;
    return z;
}

struct Combiner {
    Vec coeff, slope, center;
    double prod_coeff = 0.0;
    double norm = 1.0;

    double eval(const Vec& u) const {
        double s = 0.0;
        for (std::size_t i = 0; i < coeff.size(); ++i)
            s += coeff[i] * std::tanh(slope[i] * (u[i] - center[i]));
        if (u.size() >= 2) s += prod_coeff * (u[0] - 0.5) * (u[1] - 0.5);
        return 300.0 + 60.0 * (s / norm);
    }
};

// Coefficients are a fixed function of the seed, never of the data, so the
// target can be re-evaluated exactly from the stored channel values.
Combiner make_combiner(const PlantSpec& spec) {
    Rng rng(derive_seed(spec.seed, kTargetFnStream));
    const std::size_t p = spec.relevant.size();
    Combiner f;
    f.coeff.resize(p);
    f.slope.resize(p);
    f.center.resize(p);
    for (std::size_t i = 0; i < p; ++i) {
        f.coeff[i] = rng.uniform(0.6, 1.4);
        f.slope[i] = rng.uniform(4.0, 8.0);
        f.center[i] = rng.uniform(0.4, 0.6);
    }
    f.prod_coeff = rng.uniform(0.8, 1.6);
    double norm = 0.0;
    for (double c : f.coeff) norm += std::abs(c);
    if (p >= 2) norm += 0.25 * std::abs(f.prod_coeff);
    f.norm = norm > 0.0 ? norm : 1.0;
    return f;
}

const ChannelInfo& schema_info(const std::string& name) {
    for (const auto& info : plant_schema())
        if (info.name == name) return info;
    throw ConfigError("unknown plant channel: " + name);
}

void validate_spec(const PlantSpec& spec) {
    if (!(spec.drive_smoothness > 0.0 && spec.drive_smoothness < 1.0))
        throw ConfigError("drive_smoothness must lie in (0, 1)");
    if (spec.latent_dim > 0 && !(spec.latent_smoothness > 0.0 && spec.latent_smoothness < 1.0))
        throw ConfigError("latent_smoothness must lie in (0, 1)");
    if (spec.latent_dim > 0 && !(spec.latent_coupling >= 0.0 && spec.latent_coupling < 1.0))
        throw ConfigError("latent_coupling must lie in [0, 1)");
    if (spec.noise_sigma < 0.0) throw ConfigError("noise_sigma must be >= 0");
    if (spec.target_fn != "saturating-mix")
        throw ConfigError("unknown target_fn: " + spec.target_fn);
    if (spec.relevant.empty()) throw ConfigError("at least one relevant channel required");
    std::set<std::string> seen;
    for (const auto& [name, d] : spec.relevant) {
        schema_info(name);
        if (!seen.insert(name).second) throw ConfigError("duplicate relevant channel: " + name);
        if (d > kWarmup)
            throw ConfigError("true delay " + std::to_string(d) + " for " + name +
                              " exceeds the admissible maximum " + std::to_string(kWarmup));
    }
    if (spec.n_samples <= kWarmup + spec.max_delay())
        throw ConfigError("n_samples must exceed 10 + max true delay");
}

} // namespace

std::vector<std::string> PlantSpec::irrelevant_names() const {
    std::vector<std::string> out;
    for (const auto& info : plant_schema()) {
        bool rel = false;
        for (const auto& [name, d] : relevant)
            if (name == info.name) rel = true;
        if (!rel) out.push_back(info.name);
    }
    return out;
}

std::size_t PlantSpec::max_delay() const {
    std::size_t m = 0;
    for (const auto& [name, d] : relevant) m = std::max(m, d);
    return m;
}

std::pair<TimeSeriesDataset, GroundTruth> generate(const PlantSpec& spec) {
    validate_spec(spec);
    const std::size_t total = spec.n_samples + kWarmup;
    const auto& schema = plant_schema();

    std::vector<Vec> latents;
    for (std::size_t l = 0; l < spec.latent_dim; ++l) {
        Rng rng(derive_seed(spec.seed, kLatentStream + l));
        latents.push_back(smooth_latent_series(rng, total, spec.latent_smoothness));
    }

    // Mixing weights are drawn for every schema channel so the stream layout
    // does not depend on which channels are relevant.
    std::vector<Vec> mixing(schema.size());
    if (spec.latent_dim > 0) {
        Rng rng(derive_seed(spec.seed, kMixingStream));
        for (std::size_t c = 0; c < schema.size(); ++c) {
            Vec w(spec.latent_dim);
            double norm_sq = 0.0;
            for (double& v : w) {
                // positive weights: co-moving channels, the load-following regime
                v = rng.uniform(0.2, 1.0);
                norm_sq += v * v;
            }
            const double inv = 1.0 / std::sqrt(norm_sq);
            for (double& v : w) v *= inv;
            mixing[c] = std::move(w);
        }
    }

    std::set<std::string> relevant_set;
    for (const auto& [name, d] : spec.relevant) relevant_set.insert(name);

    // full-length physical series per schema channel
    std::vector<Vec> phys(schema.size());
    for (std::size_t c = 0; c < schema.size(); ++c) {
        std::uint64_t salt = 0;
        if (auto it = spec.channel_salt.find(schema[c].name); it != spec.channel_salt.end())
            salt = it->second;
        Rng rng(derive_seed(spec.seed, kChannelStream + c) ^ salt);
        Vec drive = ar1_series(rng, total, spec.drive_smoothness);
        if (spec.latent_dim > 0 && relevant_set.count(schema[c].name)) {
            const double cl = spec.latent_coupling;
            const double cp = std::sqrt(1.0 - cl * cl);
            for (std::size_t k = 0; k < total; ++k) {
                double shared = 0.0;
                for (std::size_t l = 0; l < spec.latent_dim; ++l)
                    shared += mixing[c][l] * latents[l][k];
                drive[k] = cl * shared + cp * drive[k];
            }
        }
        Vec series(total);
        const double lo = schema[c].lo;
        const double width = schema[c].hi - schema[c].lo;
        for (std::size_t k = 0; k < total; ++k) series[k] = lo + width * squash01(drive[k]);
        phys[c] = std::move(series);
    }

    // Target from the stored physical values at the true lags, so that
    // re-evaluation from the emitted dataset is exact.
    const Combiner combiner = make_combiner(spec);
    std::vector<std::size_t> rel_idx;
    std::vector<std::size_t> rel_delay;
    for (const auto& [name, d] : spec.relevant) {
        for (std::size_t c = 0; c < schema.size(); ++c)
            if (schema[c].name == name) rel_idx.push_back(c);
        rel_delay.push_back(d);
    }

    Vec clean(spec.n_samples);
    Vec u(rel_idx.size());
    for (std::size_t k = 0; k < spec.n_samples; ++k) {
        for (std::size_t i = 0; i < rel_idx.size(); ++i) {
            const std::size_t c = rel_idx[i];
            const double v = phys[c][kWarmup + k - rel_delay[i]];
            u[i] = (v - schema[c].lo) / (schema[c].hi - schema[c].lo);
        }
        clean[k] = combiner.eval(u);
    }

    double sigma_abs = spec.noise_sigma;
    if (spec.noise_relative) sigma_abs = spec.noise_sigma * stddev_of(clean);

    Vec target = clean;
    if (sigma_abs > 0.0) {
        Rng rng(derive_seed(spec.seed, kNoiseStream));
        for (double& v : target) v += sigma_abs * rng.gaussian();
    }

    TimeSeriesDataset ds;
    ds.sample_interval_minutes = 1.0;
    for (std::size_t c = 0; c < schema.size(); ++c)
        ds.channels.push_back({schema[c].name, schema[c].unit,
                               Vec(phys[c].begin() + kWarmup, phys[c].end())});
    ds.target = {plant_target_info().name, plant_target_info().unit, std::move(target)};
    ds.validate();

    GroundTruth gt;
    gt.relevant = spec.relevant;
    gt.noise_sigma_abs = sigma_abs;
    return {std::move(ds), std::move(gt)};
}

Vec reevaluate_target(const PlantSpec& spec, const TimeSeriesDataset& ds) {
    const Combiner combiner = make_combiner(spec);
    const std::size_t start = spec.max_delay();
    Vec out;
    out.reserve(ds.n_samples() - start);
    Vec u(spec.relevant.size());
    for (std::size_t k = start; k < ds.n_samples(); ++k) {
        for (std::size_t i = 0; i < spec.relevant.size(); ++i) {
            const auto& [name, d] = spec.relevant[i];
            const auto& info = schema_info(name);
            const double v = ds.channel(name).values[k - d];
            u[i] = (v - info.lo) / (info.hi - info.lo);
        }
        out.push_back(combiner.eval(u));
    }
    return out;
}

PlantSpec default_plant_spec(std::uint64_t seed) {
    PlantSpec spec;
    spec.n_samples = 500;
    spec.relevant = {{"F1", 6}, {"F2", 6}, {"F3", 6}, {"S_AB", 5}, {"S_CD", 4}, {"S_EF", 4},
                     {"P_A", 5}, {"P_C", 5}, {"P", 3},  {"T", 5},   {"T_C", 5},  {"TV", 4},
                     {"O2", 3}};
    spec.drive_smoothness = 0.9;
    spec.latent_dim = 1;
    spec.latent_smoothness = 0.99;
    spec.latent_coupling = 0.99995;
    spec.noise_sigma = 0.002;
    spec.noise_relative = true;
    spec.seed = seed;
    return spec;
}

void write_ground_truth_json(const GroundTruth& gt, const std::string& path) {
    nlohmann::ordered_json j;
    j["relevant_channels"] = nlohmann::ordered_json::array();
    for (const auto& [name, d] : gt.relevant)
        j["relevant_channels"].push_back({{"channel", name}, {"true_delay", d}});
    j["noise_sigma_abs"] = gt.noise_sigma_abs;
    std::ofstream out(path);
    if (!out) throw DataError("cannot write ground truth file: " + path);
    out << j.dump(2) << '\n';
}

} // namespace aeelm
