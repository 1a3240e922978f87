#include "aeelm/pipeline.hpp"

#include "aeelm/core/csv.hpp"
#include "aeelm/core/errors.hpp"
#include "aeelm/core/ini.hpp"
#include "aeelm/core/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <type_traits>

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace aeelm {

namespace {

// ------------------------------------------------------------ config

std::uint64_t to_u64(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const std::uint64_t v = std::stoull(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(what + ": expected an unsigned integer, got '" + s + "'");
    }
}

double to_double(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(what + ": expected a number, got '" + s + "'");
    }
}

std::vector<std::size_t> to_size_list(const std::string& s, const std::string& what) {
    std::vector<std::size_t> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos) continue;
        out.push_back(to_u64(item.substr(b, e - b + 1), what));
    }
    return out;
}

const std::map<std::string, std::set<std::string>>& known_config_keys() {
    static const std::map<std::string, std::set<std::string>> keys = {
        {"", {"seed"}},
        {"data", {"source", "path", "target", "synth_samples"}},
        {"mi", {"bins", "threshold"}},
        {"delay", {"d_max"}},
        {"ae", {"hidden", "candidates", "learning_rate", "momentum", "max_epochs", "tol"}},
        {"elm", {"k", "k_grid", "ridge"}},
        {"baselines",
         {"enabled", "bp_hidden", "bp_learning_rate", "bp_momentum", "bp_epochs", "rbf_centers"}},
        {"split", {"train", "test"}},
        {"metrics", {"mape_denominator"}},
    };
    return keys;
}

} // namespace

std::string PipelineConfig::dataset_label() const {
    if (data.source == "csv") return fs::path(data.path).stem().string();
    return "synth-" + std::to_string(master_seed);
}

PipelineConfig config_from_ini_text(const std::string& text) {
    const ini::File f = ini::parse(text);
    const auto& known = known_config_keys();
    for (const auto& [section, kv] : f.sections) {
        auto ks = known.find(section);
        if (ks == known.end()) throw ConfigError("unknown config section [" + section + "]");
        for (const auto& [key, value] : kv)
            if (!ks->second.count(key))
                throw ConfigError("unknown key '" + key + "' in section [" + section + "]");
    }

    PipelineConfig cfg;
    auto get = [&](const std::string& s, const std::string& k) { return f.get(s, k); };

    if (auto v = get("", "seed")) cfg.master_seed = to_u64(*v, "seed");
    if (auto v = get("data", "source")) {
        if (*v != "synth" && *v != "csv") throw ConfigError("data.source must be synth or csv");
        cfg.data.source = *v;
    }
    if (auto v = get("data", "path")) cfg.data.path = *v;
    if (auto v = get("data", "target")) cfg.data.target = *v;
    if (auto v = get("data", "synth_samples")) cfg.data.synth_samples = to_u64(*v, "data.synth_samples");
    if (auto v = get("mi", "bins")) cfg.mi.bins = to_u64(*v, "mi.bins");
    if (auto v = get("mi", "threshold")) cfg.mi.threshold = to_double(*v, "mi.threshold");
    if (auto v = get("delay", "d_max")) cfg.delay.d_max = to_u64(*v, "delay.d_max");
    if (auto v = get("ae", "hidden")) cfg.ae.hidden = to_u64(*v, "ae.hidden");
    if (auto v = get("ae", "candidates")) cfg.ae.candidates = to_size_list(*v, "ae.candidates");
    if (auto v = get("ae", "learning_rate")) cfg.ae.hyper.learning_rate = to_double(*v, "ae.learning_rate");
    if (auto v = get("ae", "momentum")) cfg.ae.hyper.momentum = to_double(*v, "ae.momentum");
    if (auto v = get("ae", "max_epochs")) cfg.ae.hyper.max_epochs = to_u64(*v, "ae.max_epochs");
    if (auto v = get("ae", "tol")) cfg.ae.hyper.tol = to_double(*v, "ae.tol");
    if (auto v = get("elm", "k")) cfg.elm.k = to_u64(*v, "elm.k");
    if (auto v = get("elm", "k_grid")) cfg.elm.k_grid = to_size_list(*v, "elm.k_grid");
    if (auto v = get("elm", "ridge")) cfg.elm.ridge_lambda = to_double(*v, "elm.ridge");
    if (auto v = get("baselines", "enabled")) {
        cfg.baselines.mlr = cfg.baselines.bp = cfg.baselines.rbf = false;
        std::stringstream ss(*v);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto b = item.find_first_not_of(" \t");
            const auto e = item.find_last_not_of(" \t");
            if (b == std::string::npos) continue;
            item = item.substr(b, e - b + 1);
            if (item == "mlr") cfg.baselines.mlr = true;
            else if (item == "bp") cfg.baselines.bp = true;
            else if (item == "rbf") cfg.baselines.rbf = true;
            else if (item == "none") continue;
            else throw ConfigError("unknown baseline '" + item + "'");
        }
    }
    if (auto v = get("baselines", "bp_hidden")) cfg.baselines.bp_hidden = to_u64(*v, "baselines.bp_hidden");
    if (auto v = get("baselines", "bp_learning_rate"))
        cfg.baselines.bp_hyper.learning_rate = to_double(*v, "baselines.bp_learning_rate");
    if (auto v = get("baselines", "bp_momentum"))
        cfg.baselines.bp_hyper.momentum = to_double(*v, "baselines.bp_momentum");
    if (auto v = get("baselines", "bp_epochs"))
        cfg.baselines.bp_hyper.max_epochs = to_u64(*v, "baselines.bp_epochs");
    if (auto v = get("baselines", "rbf_centers")) cfg.baselines.rbf_centers = to_u64(*v, "baselines.rbf_centers");
    if (auto v = get("split", "train")) cfg.split.train_count = to_u64(*v, "split.train");
    if (auto v = get("split", "test")) cfg.split.test_count = to_u64(*v, "split.test");
    if (auto v = get("metrics", "mape_denominator")) {
        if (*v == "predicted") cfg.metrics.mape_denominator = MapeDenominator::predicted;
        else if (*v == "measured") cfg.metrics.mape_denominator = MapeDenominator::measured;
        else throw ConfigError("metrics.mape_denominator must be predicted or measured");
    }
    return cfg;
}

namespace {

ordered_json config_to_json(const PipelineConfig& cfg) {
    ordered_json j;
    j["seed"] = cfg.master_seed;
    j["data"] = {{"source", cfg.data.source},
                 {"path", cfg.data.path},
                 {"target", cfg.data.target},
                 {"synth_samples", cfg.data.synth_samples}};
    j["mi"] = {{"bins", cfg.mi.bins}, {"threshold", cfg.mi.threshold}};
    j["delay"] = {{"d_max", cfg.delay.d_max}};
    j["ae"] = {{"hidden", cfg.ae.hidden},
               {"candidates", cfg.ae.candidates},
               {"learning_rate", cfg.ae.hyper.learning_rate},
               {"momentum", cfg.ae.hyper.momentum},
               {"max_epochs", cfg.ae.hyper.max_epochs},
               {"tol", cfg.ae.hyper.tol}};
    j["elm"] = {{"k", cfg.elm.k}, {"k_grid", cfg.elm.k_grid}, {"ridge", cfg.elm.ridge_lambda}};
    std::vector<std::string> enabled;
    if (cfg.baselines.mlr) enabled.push_back("mlr");
    if (cfg.baselines.bp) enabled.push_back("bp");
    if (cfg.baselines.rbf) enabled.push_back("rbf");
    j["baselines"] = {{"enabled", enabled},
                      {"bp_hidden", cfg.baselines.bp_hidden},
                      {"bp_learning_rate", cfg.baselines.bp_hyper.learning_rate},
                      {"bp_momentum", cfg.baselines.bp_hyper.momentum},
                      {"bp_epochs", cfg.baselines.bp_hyper.max_epochs},
                      {"rbf_centers", cfg.baselines.rbf_centers}};
    j["split"] = {{"train", cfg.split.train_count}, {"test", cfg.split.test_count}};
    j["metrics"] = {{"mape_denominator",
                     cfg.metrics.mape_denominator == MapeDenominator::predicted ? "predicted"
                                                                                : "measured"}};
    return j;
}

PipelineConfig config_from_json_obj(const json& j) {
    PipelineConfig cfg;
    cfg.master_seed = j.at("seed").get<std::uint64_t>();
    const auto& d = j.at("data");
    cfg.data.source = d.at("source").get<std::string>();
    cfg.data.path = d.at("path").get<std::string>();
    cfg.data.target = d.at("target").get<std::string>();
    cfg.data.synth_samples = d.at("synth_samples").get<std::size_t>();
    cfg.mi.bins = j.at("mi").at("bins").get<std::size_t>();
    cfg.mi.threshold = j.at("mi").at("threshold").get<double>();
    cfg.delay.d_max = j.at("delay").at("d_max").get<std::size_t>();
    const auto& ae = j.at("ae");
    cfg.ae.hidden = ae.at("hidden").get<std::size_t>();
    cfg.ae.candidates = ae.at("candidates").get<std::vector<std::size_t>>();
    cfg.ae.hyper.learning_rate = ae.at("learning_rate").get<double>();
    cfg.ae.hyper.momentum = ae.at("momentum").get<double>();
    cfg.ae.hyper.max_epochs = ae.at("max_epochs").get<std::size_t>();
    cfg.ae.hyper.tol = ae.at("tol").get<double>();
    cfg.elm.k = j.at("elm").at("k").get<std::size_t>();
    cfg.elm.k_grid = j.at("elm").at("k_grid").get<std::vector<std::size_t>>();
    cfg.elm.ridge_lambda = j.at("elm").at("ridge").get<double>();
    const auto& b = j.at("baselines");
    cfg.baselines.mlr = cfg.baselines.bp = cfg.baselines.rbf = false;
    for (const auto& name : b.at("enabled")) {
        if (name == "mlr") cfg.baselines.mlr = true;
        if (name == "bp") cfg.baselines.bp = true;
        if (name == "rbf") cfg.baselines.rbf = true;
    }
    cfg.baselines.bp_hidden = b.at("bp_hidden").get<std::size_t>();
    cfg.baselines.bp_hyper.learning_rate = b.at("bp_learning_rate").get<double>();
    cfg.baselines.bp_hyper.momentum = b.at("bp_momentum").get<double>();
    cfg.baselines.bp_hyper.max_epochs = b.at("bp_epochs").get<std::size_t>();
    cfg.baselines.rbf_centers = b.at("rbf_centers").get<std::size_t>();
    cfg.split.train_count = j.at("split").at("train").get<std::size_t>();
    cfg.split.test_count = j.at("split").at("test").get<std::size_t>();
    cfg.metrics.mape_denominator = j.at("metrics").at("mape_denominator") == "measured"
                                       ? MapeDenominator::measured
                                       : MapeDenominator::predicted;
    return cfg;
}

} // namespace

std::string config_to_json_text(const PipelineConfig& cfg) { return config_to_json(cfg).dump(2); }

PipelineConfig config_from_json_text(const std::string& text) {
    return config_from_json_obj(json::parse(text));
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        const json j = json::parse(text);
        if (j.contains("config")) return config_from_json_obj(j.at("config")); // manifest replay
        return config_from_json_obj(j);
    }
    return config_from_ini_text(text);
}

// ------------------------------------------------------------ stages

namespace {

template <typename F>
auto run_stage(const std::string& name, std::vector<StageTiming>& timings, F&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    auto record = [&] {
        timings.push_back(
            {name, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()});
    };
    try {
        if constexpr (std::is_void_v<std::invoke_result_t<F>>) {
            std::forward<F>(fn)();
            record();
        } else {
            auto result = std::forward<F>(fn)();
            record();
            return result;
        }
    } catch (const NumericError& e) {
        throw NumericError(name + " stage: " + e.what());
    } catch (const ConfigError& e) {
        throw ConfigError(name + " stage: " + e.what());
    } catch (const DataError& e) {
        throw DataError(name + " stage: " + e.what());
    } catch (const std::invalid_argument& e) {
        throw DataError(name + " stage: " + e.what());
    }
}

// restrict a dataset to the named channels (target kept)
TimeSeriesDataset subset_channels(const TimeSeriesDataset& ds,
                                  const std::vector<std::string>& names) {
    TimeSeriesDataset out;
    out.sample_interval_minutes = ds.sample_interval_minutes;
    out.target = ds.target;
    for (const auto& name : names) out.channels.push_back(ds.channel(name));
    return out;
}

std::size_t normalize_lagged(LaggedMatrix& lm, const NormalizationParams& params) {
    std::size_t clipped = 0;
    for (std::size_t c = 0; c < lm.columns.size(); ++c) {
        auto it = params.ranges.find(lm.columns[c]);
        if (it == params.ranges.end())
            throw DataError("no normalization range for column " + lm.columns[c]);
        const double lo = it->second.lo;
        const double inv = 1.0 / (it->second.hi - it->second.lo);
        for (std::size_t r = 0; r < lm.x.rows(); ++r) {
            double v = (lm.x(r, c) - lo) * inv;
            if (v < 0.0) {
                v = 0.0;
                ++clipped;
            } else if (v > 1.0) {
                v = 1.0;
                ++clipped;
            }
            lm.x(r, c) = v;
        }
    }
    return clipped;
}

Matrix slice_rows(const Matrix& m, std::size_t begin, std::size_t end) {
    Matrix out(end - begin, m.cols());
    for (std::size_t r = begin; r < end; ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out(r - begin, c) = m(r, c);
    return out;
}

std::size_t pick_elm_k(const Matrix& z, const Vec& y, const ElmConfig& cfg, std::uint64_t seed,
                       MapeDenominator denom) {
    if (cfg.k_grid.empty()) return cfg.k;
    std::vector<std::size_t> grid = cfg.k_grid;
    std::sort(grid.begin(), grid.end());
    const std::size_t n_fit = z.rows() * 4 / 5;
    if (n_fit < 2 || n_fit >= z.rows()) throw DataError("k grid: too few rows for a sub-split");
    const Matrix z_fit = slice_rows(z, 0, n_fit);
    const Matrix z_val = slice_rows(z, n_fit, z.rows());
    const Vec y_fit(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n_fit));
    const Vec y_val(y.begin() + static_cast<std::ptrdiff_t>(n_fit), y.end());
    std::size_t best_k = grid.front();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k : grid) {
        double score;
        try {
            const ElmModel m = train_elm(z_fit, y_fit, k, seed, cfg.ridge_lambda);
            score = mape(y_val, elm_predict(m, z_val), denom);
        } catch (const NumericError&) {
            score = std::numeric_limits<double>::infinity();
        }
        if (score < best) {
            best = score;
            best_k = k;
        }
    }
    return best_k;
}

} // namespace

const ModelResult& PipelineVariantResult::model(const std::string& name) const {
    for (const auto& m : models)
        if (m.name == name) return m;
    throw DataError("no result for model: " + name);
}

const PipelineVariantResult& AblationReport::variant(const std::string& name) const {
    for (const auto& v : variants)
        if (v.variant == name) return v;
    throw DataError("no such ablation variant: " + name);
}

LoadedData load_pipeline_data(const PipelineConfig& cfg) {
    LoadedData out;
    if (cfg.data.source == "csv") {
        if (cfg.data.path.empty()) throw ConfigError("data.source=csv requires data.path");
        out.ds = load_csv(cfg.data.path, cfg.data.target);
    } else if (cfg.data.source == "synth") {
        PlantSpec spec = default_plant_spec(derive_seed(cfg.master_seed, kSeedSynth));
        spec.n_samples = cfg.data.synth_samples;
        auto [ds, gt] = generate(spec);
        out.ds = std::move(ds);
        out.ground_truth = std::move(gt);
    } else {
        throw ConfigError("unknown data source: " + cfg.data.source);
    }
    return out;
}

PipelineVariantResult run_pipeline_on(const TimeSeriesDataset& ds, const PipelineConfig& cfg,
                                      const PipelineOptions& opts) {
    ds.validate();
    if (cfg.split.train_count + cfg.split.test_count != ds.n_samples())
        throw ConfigError("split counts must sum to the dataset length " +
                          std::to_string(ds.n_samples()));
    if (cfg.split.train_count <= cfg.delay.d_max + 1)
        throw ConfigError("train split too small for d_max");

    PipelineVariantResult res;
    res.variant = opts.variant_name;
    auto& timings = res.timings;

    const auto split = split_chronological(ds, cfg.split);
    const TimeSeriesDataset& train_ds = split.first;

    // Step 2: feature selection at lag 0, training rows only.
    if (opts.use_mi) {
        res.selection = run_stage("mi_select", timings, [&] {
            return select_features(train_ds, cfg.mi.threshold, cfg.mi.bins);
        });
        res.selected = res.selection.selected;
        if (res.selected.empty())
            throw DataError("mi_select stage: no channel cleared the MI threshold " +
                            std::to_string(cfg.mi.threshold));
    } else {
        res.selected = ds.channel_names();
        res.selection.threshold = cfg.mi.threshold;
    }

    // Step 3: per-channel delay scan on training rows; lag reconstruction over
    // the full series so test rows keep their historical lag context.
    if (opts.use_delay) {
        res.delays = run_stage("delay_scan", timings, [&] {
            return scan_delays(train_ds, res.selected, cfg.delay.d_max, cfg.mi.bins);
        });
    } else {
        res.delays.d_max = cfg.delay.d_max;
        for (const auto& name : res.selected) res.delays.entries.emplace_back(name, DelayScan{});
    }

    LaggedMatrix lagged = run_stage("build_lagged", timings,
                                    [&] { return build_lagged_matrix(ds, res.selected, res.delays); });

    // Step 4a: min-max ranges from training rows only.
    run_stage("normalize", timings, [&] {
        res.norm = fit_minmax(subset_channels(train_ds, res.selected));
        res.clip_count = normalize_lagged(lagged, res.norm);
    });

    const std::size_t n_train_rows = cfg.split.train_count - cfg.delay.d_max;
    const Matrix x_train = slice_rows(lagged.x, 0, n_train_rows);
    const Matrix x_test = slice_rows(lagged.x, n_train_rows, lagged.x.rows());
    const Vec y_train(lagged.y.begin(), lagged.y.begin() + static_cast<std::ptrdiff_t>(n_train_rows));
    res.y_test.assign(lagged.y.begin() + static_cast<std::ptrdiff_t>(n_train_rows), lagged.y.end());
    res.train_rows = x_train.rows();
    res.test_rows = x_test.rows();

    // Step 4b: autoencoder compression.
    Matrix z_train, z_test;
    if (opts.use_ae) {
        run_stage("ae", timings, [&] {
            std::size_t hidden = cfg.ae.hidden;
            if (hidden == 0) {
                std::vector<std::size_t> candidates;
                for (std::size_t c : cfg.ae.candidates)
                    if (c >= 1 && c < x_train.cols()) candidates.push_back(c);
                if (candidates.empty())
                    throw ConfigError("no admissible hidden-size candidate below input dim " +
                                      std::to_string(x_train.cols()));
                res.hidden_search = search_hidden_size(x_train, y_train, candidates, cfg.elm,
                                                       cfg.ae.hyper,
                                                       derive_seed(cfg.master_seed, kSeedAeSearch));
                hidden = res.hidden_search.best_hidden;
            }
            auto [ae, hist] = ae_train(
                ae_init(x_train.cols(), hidden, derive_seed(cfg.master_seed, kSeedAeFinal)),
                x_train, cfg.ae.hyper);
            res.ae = std::move(ae);
            res.ae_history = std::move(hist);
            res.hidden_size = hidden;
            z_train = encode(*res.ae, x_train);
            z_test = encode(*res.ae, x_test);
        });
    } else {
        z_train = x_train;
        z_test = x_test;
    }
    res.feature_dim = z_train.cols();

    // Step 5: ELM and baselines on the extracted features.
    run_stage("models", timings, [&] {
        res.elm_k = pick_elm_k(z_train, y_train, cfg.elm, derive_seed(cfg.master_seed, kSeedElm),
                               cfg.metrics.mape_denominator);
        res.elm = train_elm(z_train, y_train, res.elm_k, derive_seed(cfg.master_seed, kSeedElm),
                            cfg.elm.ridge_lambda);
        if (cfg.baselines.mlr) res.mlr = train_mlr(z_train, y_train);
        if (cfg.baselines.bp)
            res.bp = train_bp(z_train, y_train, cfg.baselines.bp_hidden, cfg.baselines.bp_hyper,
                              derive_seed(cfg.master_seed, kSeedBp));
        if (cfg.baselines.rbf)
            res.rbf = train_rbf(z_train, y_train, cfg.baselines.rbf_centers,
                                derive_seed(cfg.master_seed, kSeedRbf));
    });

    run_stage("evaluate", timings, [&] {
        auto add = [&](const std::string& name, Vec pred) {
            ModelResult mr;
            mr.name = name;
            mr.report = evaluate(res.y_test, pred, cfg.metrics.mape_denominator);
            mr.predictions = std::move(pred);
            res.models.push_back(std::move(mr));
        };
        add("ae_elm", elm_predict(res.elm, z_test));
        if (res.mlr) add("mlr", mlr_predict(*res.mlr, z_test));
        if (res.bp) add("bp", bp_predict(*res.bp, z_test));
        if (res.rbf) add("rbf", rbf_predict(*res.rbf, z_test));
    });

    res.total_seconds = 0.0;
    for (const auto& t : res.timings) res.total_seconds += t.seconds;
    return res;
}

PipelineRunResult run_pipeline(const PipelineConfig& cfg) {
    PipelineRunResult run{load_pipeline_data(cfg), {}};
    run.result = run_pipeline_on(run.data.ds, cfg);
    return run;
}

AblationReport run_ablation(const PipelineConfig& cfg) {
    AblationReport report{load_pipeline_data(cfg), {}};
    const std::vector<PipelineOptions> variants = {
        {true, true, true, "full"},
        {true, false, true, "no-delay"},
        {false, true, true, "no-mi"},
        {true, true, false, "no-ae"},
    };
    for (const auto& opts : variants)
        report.variants.push_back(run_pipeline_on(report.data.ds, cfg, opts));
    return report;
}

// ------------------------------------------------------------ artifacts

namespace {

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    out << text;
}

ordered_json realized_json(const PipelineVariantResult& r) {
    ordered_json j;
    j["variant"] = r.variant;
    j["selected"] = r.selected;
    ordered_json delays;
    for (const auto& [name, scan] : r.delays.entries) delays[name] = scan.delay;
    j["delays"] = delays;
    j["d_max"] = r.delays.d_max;
    j["hidden_size"] = r.hidden_size;
    j["elm_k"] = r.elm_k;
    j["feature_dim"] = r.feature_dim;
    j["train_rows"] = r.train_rows;
    j["test_rows"] = r.test_rows;
    j["clip_count"] = r.clip_count;
    ordered_json norm;
    for (const auto& name : r.selected) {
        const auto& range = r.norm.ranges.at(name);
        norm[name] = {{"lo", range.lo}, {"hi", range.hi}};
    }
    j["normalization"] = norm;
    return j;
}

ordered_json manifest_json(const PipelineConfig& cfg, const std::string& mode,
                           const ordered_json& realized) {
    ordered_json j;
    j["artifact"] = "aeelm";
    j["version"] = kVersion;
    j["mode"] = mode;
    j["master_seed"] = cfg.master_seed;
    j["stage_seeds"] = {{"synth", derive_seed(cfg.master_seed, kSeedSynth)},
                        {"ae_search", derive_seed(cfg.master_seed, kSeedAeSearch)},
                        {"ae_final", derive_seed(cfg.master_seed, kSeedAeFinal)},
                        {"elm", derive_seed(cfg.master_seed, kSeedElm)},
                        {"bp", derive_seed(cfg.master_seed, kSeedBp)},
                        {"rbf", derive_seed(cfg.master_seed, kSeedRbf)}};
    j["config"] = config_to_json(cfg);
    j["realized"] = realized;
    return j;
}

void write_mi_report_csv(const FeatureSelection& sel, const std::string& path) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& [name, est] : sel.scores) {
        const bool selected =
            std::find(sel.selected.begin(), sel.selected.end(), name) != sel.selected.end();
        rows.push_back({name, csv::format_double(est.raw_mi), csv::format_double(est.normalized_mi),
                        selected ? "1" : "0"});
    }
    csv::write_file(path, {"channel", "raw_mi_nats", "normalized_mi", "selected"}, rows);
}

void write_delay_reports(const DelayTable& delays, double interval_minutes,
                         const std::string& report_path, const std::string& curves_path) {
    std::vector<std::vector<std::string>> rows, curve_rows;
    for (const auto& [name, scan] : delays.entries) {
        if (scan.curve.empty()) continue;
        rows.push_back({name, csv::format_double(static_cast<double>(scan.delay) * interval_minutes),
                        csv::format_double(scan.curve[scan.delay].normalized_mi),
                        csv::format_double(scan.curve[0].normalized_mi)});
        for (std::size_t d = 0; d < scan.curve.size(); ++d)
            curve_rows.push_back({name,
                                  csv::format_double(static_cast<double>(d) * interval_minutes),
                                  csv::format_double(scan.curve[d].raw_mi),
                                  csv::format_double(scan.curve[d].normalized_mi)});
    }
    csv::write_file(report_path, {"channel", "delay_minutes", "mi_at_best", "mi_at_zero"}, rows);
    csv::write_file(curves_path, {"channel", "delay_minutes", "raw_mi_nats", "normalized_mi"},
                    curve_rows);
}

void write_report_csv(const std::string& label, const std::vector<const PipelineVariantResult*>& rs,
                      const std::string& path) {
    std::vector<std::string> header{"dataset"};
    const auto& models = rs.front()->models;
    for (const auto& m : models) {
        header.push_back(m.name + "_nmse");
        header.push_back(m.name + "_mape_percent");
        header.push_back(m.name + "_r2");
    }
    std::vector<std::vector<std::string>> rows;
    for (const auto* r : rs) {
        std::vector<std::string> row{rs.size() == 1 ? label : label + "/" + r->variant};
        for (const auto& m : r->models) {
            row.push_back(csv::format_double(m.report.nmse));
            row.push_back(csv::format_double(m.report.mape_percent));
            row.push_back(csv::format_double(m.report.r2));
        }
        rows.push_back(std::move(row));
    }
    csv::write_file(path, header, rows);
}

ordered_json report_to_json(const EvaluationReport& r) {
    return {{"mape_percent", r.mape_percent},
            {"nmse", r.nmse},
            {"r2", r.r2},
            {"n", r.n},
            {"abs_error_quartiles",
             {{"min", r.abs_error_quartiles.min},
              {"q1", r.abs_error_quartiles.q1},
              {"median", r.abs_error_quartiles.median},
              {"q3", r.abs_error_quartiles.q3},
              {"max", r.abs_error_quartiles.max}}}};
}

void write_prediction_trace(const PipelineVariantResult& r, const std::string& path) {
    std::vector<std::string> header{"row", "measured"};
    for (const auto& m : r.models) header.push_back("pred_" + m.name);
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < r.y_test.size(); ++i) {
        std::vector<std::string> row{std::to_string(i), csv::format_double(r.y_test[i])};
        for (const auto& m : r.models) row.push_back(csv::format_double(m.predictions[i]));
        rows.push_back(std::move(row));
    }
    csv::write_file(path, header, rows);
}

void write_hidden_search_csv(const HiddenSearchResult& hs, const std::string& path) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& [hidden, mape] : hs.mape_per_candidate)
        rows.push_back({std::to_string(hidden), csv::format_double(mape)});
    csv::write_file(path, {"hidden_size", "validation_mape_percent"}, rows);
}

void write_abs_error_files(const PipelineVariantResult& r, const std::string& hist_path,
                           const std::string& box_path) {
    std::vector<std::vector<std::string>> hist_rows, box_rows;
    const std::size_t nbins = 20;
    for (const auto& m : r.models) {
        Vec errs(r.y_test.size());
        double emax = 0.0;
        for (std::size_t i = 0; i < errs.size(); ++i) {
            errs[i] = std::abs(r.y_test[i] - m.predictions[i]);
            emax = std::max(emax, errs[i]);
        }
        const double width = emax > 0.0 ? emax / static_cast<double>(nbins) : 1.0;
        std::vector<std::size_t> counts(nbins, 0);
        for (double e : errs) {
            auto b = static_cast<std::size_t>(e / width);
            if (b >= nbins) b = nbins - 1;
            ++counts[b];
        }
        for (std::size_t b = 0; b < nbins; ++b)
            hist_rows.push_back({m.name, csv::format_double(width * static_cast<double>(b)),
                                 csv::format_double(width * static_cast<double>(b + 1)),
                                 std::to_string(counts[b])});
        const Quartiles q = m.report.abs_error_quartiles;
        box_rows.push_back({m.name, csv::format_double(q.min), csv::format_double(q.q1),
                            csv::format_double(q.median), csv::format_double(q.q3),
                            csv::format_double(q.max)});
    }
    csv::write_file(hist_path, {"model", "bin_lo", "bin_hi", "count"}, hist_rows);
    csv::write_file(box_path, {"model", "min", "q1", "median", "q3", "max"}, box_rows);
}

void write_timings_csv(const std::vector<const PipelineVariantResult*>& rs,
                       const std::string& path) {
    std::vector<std::vector<std::string>> rows;
    for (const auto* r : rs) {
        for (const auto& t : r->timings)
            rows.push_back({r->variant, t.stage, csv::format_double(t.seconds)});
        rows.push_back({r->variant, "total", csv::format_double(r->total_seconds)});
    }
    csv::write_file(path, {"variant", "stage", "seconds"}, rows);
}

void write_models(const PipelineVariantResult& r, const std::string& dir) {
    fs::create_directories(dir);
    if (r.ae) save_autoencoder_json(*r.ae, dir + "/ae.json");
    save_elm_json(r.elm, dir + "/elm.json");
    if (r.mlr) save_mlr_json(*r.mlr, dir + "/mlr.json");
    if (r.bp) save_bp_json(*r.bp, dir + "/bp.json");
    if (r.rbf) save_rbf_json(*r.rbf, dir + "/rbf.json");
}

void write_evaluation_json(const PipelineConfig& cfg, const PipelineVariantResult& r,
                           const std::string& path) {
    ordered_json j;
    j["dataset"] = cfg.dataset_label();
    j["variant"] = r.variant;
    j["test_rows"] = r.test_rows;
    j["clip_count"] = r.clip_count;
    ordered_json models;
    for (const auto& m : r.models) models[m.name] = report_to_json(m.report);
    j["models"] = models;
    write_text(path, j.dump(2) + "\n");
}

} // namespace

void write_run_artifacts(const PipelineRunResult& run, const PipelineConfig& cfg,
                         const std::string& out_dir) {
    fs::create_directories(out_dir);
    const PipelineVariantResult& r = run.result;

    write_csv(run.data.ds, out_dir + "/dataset.csv");
    if (run.data.ground_truth) write_ground_truth_json(*run.data.ground_truth, out_dir + "/ground_truth.json");
    write_text(out_dir + "/manifest.json", manifest_json(cfg, "train", realized_json(r)).dump(2) + "\n");
    write_models(r, out_dir + "/models");
    if (r.ae) write_history_csv(r.ae_history, out_dir + "/ae_history.csv");
    if (!r.selection.scores.empty()) write_mi_report_csv(r.selection, out_dir + "/mi_report.csv");
    write_delay_reports(r.delays, run.data.ds.sample_interval_minutes, out_dir + "/delay_report.csv",
                        out_dir + "/delay_curves.csv");
    write_report_csv(cfg.dataset_label(), {&r}, out_dir + "/report.csv");
    write_evaluation_json(cfg, r, out_dir + "/evaluation.json");
    write_prediction_trace(r, out_dir + "/prediction_trace.csv");
    if (!r.hidden_search.mape_per_candidate.empty())
        write_hidden_search_csv(r.hidden_search, out_dir + "/hidden_size_search.csv");
    write_abs_error_files(r, out_dir + "/abs_error_hist.csv", out_dir + "/abs_error_box.csv");
    write_timings_csv({&r}, out_dir + "/timings.csv");
}

void emit_plot_data(const AblationReport& report, const std::string& out_dir) {
    fs::create_directories(out_dir);
    const auto& full = report.variant("full");
    const auto& no_ae = report.variant("no-ae");

    if (!full.hidden_search.mape_per_candidate.empty())
        write_hidden_search_csv(full.hidden_search, out_dir + "/hidden_size_search.csv");

    std::vector<std::vector<std::string>> fig7;
    for (const auto& m : full.models)
        fig7.push_back({m.name, csv::format_double(m.report.mape_percent),
                        csv::format_double(no_ae.model(m.name).report.mape_percent)});
    csv::write_file(out_dir + "/mape_ae_ablation.csv",
                    {"model", "mape_with_ae_percent", "mape_without_ae_percent"}, fig7);

    write_prediction_trace(full, out_dir + "/prediction_trace.csv");
    write_abs_error_files(full, out_dir + "/abs_error_hist.csv", out_dir + "/abs_error_box.csv");
}

void write_ablation_artifacts(const AblationReport& report, const PipelineConfig& cfg,
                              const std::string& out_dir) {
    fs::create_directories(out_dir);
    write_csv(report.data.ds, out_dir + "/dataset.csv");
    if (report.data.ground_truth)
        write_ground_truth_json(*report.data.ground_truth, out_dir + "/ground_truth.json");
    write_text(out_dir + "/manifest.json",
               manifest_json(cfg, "ablate", realized_json(report.variant("full"))).dump(2) + "\n");

    std::vector<std::vector<std::string>> rows;
    for (const auto& v : report.variants)
        for (const auto& m : v.models)
            rows.push_back({v.variant, m.name, csv::format_double(m.report.nmse),
                            csv::format_double(m.report.mape_percent),
                            csv::format_double(m.report.r2)});
    csv::write_file(out_dir + "/ablation_report.csv",
                    {"variant", "model", "nmse", "mape_percent", "r2"}, rows);

    std::vector<const PipelineVariantResult*> ptrs;
    for (const auto& v : report.variants) ptrs.push_back(&v);
    write_timings_csv(ptrs, out_dir + "/timings.csv");
    emit_plot_data(report, out_dir);
}

ReplayEvaluation evaluate_run(const std::string& run_dir) {
    const std::string manifest_path = run_dir + "/manifest.json";
    std::ifstream in(manifest_path);
    if (!in) throw ConfigError("no manifest.json under " + run_dir);
    const json manifest = json::parse(in);
    const PipelineConfig cfg = config_from_json_obj(manifest.at("config"));
    const json& realized = manifest.at("realized");

    const LoadedData data = load_pipeline_data(cfg);
    const std::vector<std::string> selected =
        realized.at("selected").get<std::vector<std::string>>();

    DelayTable delays;
    delays.d_max = realized.at("d_max").get<std::size_t>();
    for (const auto& name : selected) {
        DelayScan scan;
        scan.delay = realized.at("delays").at(name).get<std::size_t>();
        delays.entries.emplace_back(name, scan);
    }

    LaggedMatrix lagged = build_lagged_matrix(data.ds, selected, delays);
    NormalizationParams norm;
    for (const auto& name : selected) {
        const auto& range = realized.at("normalization").at(name);
        norm.ranges[name] = {range.at("lo").get<double>(), range.at("hi").get<double>()};
    }
    normalize_lagged(lagged, norm);

    const std::size_t n_train_rows = cfg.split.train_count - delays.d_max;
    Matrix z = slice_rows(lagged.x, n_train_rows, lagged.x.rows());
    ReplayEvaluation out;
    out.dataset_label = cfg.dataset_label();
    out.y_test.assign(lagged.y.begin() + static_cast<std::ptrdiff_t>(n_train_rows), lagged.y.end());

    const std::string models_dir = run_dir + "/models";
    if (fs::exists(models_dir + "/ae.json")) {
        const AutoencoderModel ae = load_autoencoder_json(models_dir + "/ae.json");
        z = encode(ae, z);
    }
    auto add = [&](const std::string& name, Vec pred) {
        ModelResult mr;
        mr.name = name;
        mr.report = evaluate(out.y_test, pred, cfg.metrics.mape_denominator);
        mr.predictions = std::move(pred);
        out.models.push_back(std::move(mr));
    };
    if (fs::exists(models_dir + "/elm.json")) add("ae_elm", elm_predict(load_elm_json(models_dir + "/elm.json"), z));
    if (fs::exists(models_dir + "/mlr.json")) add("mlr", mlr_predict(load_mlr_json(models_dir + "/mlr.json"), z));
    if (fs::exists(models_dir + "/bp.json")) add("bp", bp_predict(load_bp_json(models_dir + "/bp.json"), z));
    if (fs::exists(models_dir + "/rbf.json")) add("rbf", rbf_predict(load_rbf_json(models_dir + "/rbf.json"), z));
    if (out.models.empty()) throw DataError("no model files under " + models_dir);
    return out;
}

} // namespace aeelm
