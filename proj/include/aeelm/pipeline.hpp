#pragma once

#include "aeelm/autoencoder.hpp"
#include "aeelm/baselines.hpp"
#include "aeelm/dataset.hpp"
#include "aeelm/delay.hpp"
#include "aeelm/elm.hpp"
#include "aeelm/metrics.hpp"
#include "aeelm/mi.hpp"
#include "aeelm/synthplant.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace aeelm {

inline constexpr const char* kVersion = "0.1.0";

// Five-stage procedure: load, MI feature selection at lag 0, per-feature
// delay scan + lagged-matrix reconstruction, normalization + AE feature
// extraction, ELM (and baselines) on the extracted features. Everything that
// learns — MI scores, delays, normalization ranges, model parameters — sees
// training rows only; test rows reach the predict/evaluate paths alone.

struct DataConfig {
    std::string source = "synth"; // synth | csv
    std::string path;             // csv only
    std::string target = "NOx";
    std::size_t synth_samples = 500;
};

struct MiConfig {
    std::size_t bins = 0; // 0 = ceil(sqrt(n))
    double threshold = 0.6;
};

struct DelayConfig {
    std::size_t d_max = 10;
};

struct AeConfig {
    std::size_t hidden = 0; // 0 = search over candidates
    std::vector<std::size_t> candidates = {6, 7, 8, 9, 10, 11, 12};
    AeHyper hyper;
};

struct BaselinesConfig {
    bool mlr = true;
    bool bp = true;
    bool rbf = true;
    std::size_t bp_hidden = 10;
    AeHyper bp_hyper{0.2, 0.9, 8000, 1e-8};
    std::size_t rbf_centers = 25;
};

struct MetricsConfig {
    MapeDenominator mape_denominator = MapeDenominator::predicted;
};

struct PipelineConfig {
    DataConfig data;
    MiConfig mi;
    DelayConfig delay;
    AeConfig ae;
    ElmConfig elm;
    BaselinesConfig baselines;
    SplitSpec split{400, 100};
    MetricsConfig metrics;
    std::uint64_t master_seed = 42;

    std::string dataset_label() const;
};

// Accepts a sectioned key=value config file or a manifest JSON (replay).
PipelineConfig load_config(const std::string& path);
PipelineConfig config_from_ini_text(const std::string& text);
std::string config_to_json_text(const PipelineConfig& cfg); // embedded in manifests
PipelineConfig config_from_json_text(const std::string& text);

// stage seed streams derived from the master seed (fixed ids)
enum SeedStream : std::uint64_t {
    kSeedSynth = 1,
    kSeedAeSearch = 2,
    kSeedAeFinal = 3,
    kSeedElm = 4,
    kSeedBp = 5,
    kSeedRbf = 6,
};

struct StageTiming {
    std::string stage;
    double seconds = 0.0;
};

struct ModelResult {
    std::string name; // ae_elm | mlr | bp | rbf
    EvaluationReport report;
    Vec predictions; // test rows
};

struct PipelineOptions {
    bool use_mi = true;
    bool use_delay = true;
    bool use_ae = true;
    std::string variant_name = "full";
};

struct PipelineVariantResult {
    std::string variant;
    std::vector<std::string> selected;      // model input channels, ranked
    FeatureSelection selection;             // empty scores when MI skipped
    DelayTable delays;
    NormalizationParams norm;
    std::size_t clip_count = 0;
    std::size_t hidden_size = 0;            // 0 when AE skipped
    HiddenSearchResult hidden_search;       // empty when fixed or skipped
    TrainingHistory ae_history;
    std::size_t elm_k = 0;
    std::size_t train_rows = 0;
    std::size_t test_rows = 0;
    std::size_t feature_dim = 0;

    std::optional<AutoencoderModel> ae;
    ElmModel elm;
    std::optional<MlrModel> mlr;
    std::optional<BpModel> bp;
    std::optional<RbfModel> rbf;

    std::vector<ModelResult> models;
    Vec y_test;

    std::vector<StageTiming> timings;
    double total_seconds = 0.0;

    const ModelResult& model(const std::string& name) const;
};

PipelineVariantResult run_pipeline_on(const TimeSeriesDataset& ds, const PipelineConfig& cfg,
                                      const PipelineOptions& opts = {});

struct LoadedData {
    TimeSeriesDataset ds;
    std::optional<GroundTruth> ground_truth; // synth source only
};

LoadedData load_pipeline_data(const PipelineConfig& cfg);

struct PipelineRunResult {
    LoadedData data;
    PipelineVariantResult result;
};

PipelineRunResult run_pipeline(const PipelineConfig& cfg);

// Variants: full; delays forced to zero; MI selection skipped (all channels);
// AE skipped (normalized lagged features fed raw to every model). All four
// share the master seed and are evaluated on the identical test rows.
struct AblationReport {
    LoadedData data;
    std::vector<PipelineVariantResult> variants;

    const PipelineVariantResult& variant(const std::string& name) const;
};

AblationReport run_ablation(const PipelineConfig& cfg);

// Artifact writers. Everything under out_dir; deterministic byte-for-byte
// except timings.csv.
void write_run_artifacts(const PipelineRunResult& run, const PipelineConfig& cfg,
                         const std::string& out_dir);
void write_ablation_artifacts(const AblationReport& report, const PipelineConfig& cfg,
                              const std::string& out_dir);

// Plot-data series (hidden-size curve, with/without-AE bars, prediction
// traces, absolute-error histograms and box summaries) for a completed run.
void emit_plot_data(const AblationReport& report, const std::string& out_dir);

// Reload a finished run directory, rebuild the test features from the
// manifest, and re-score the persisted models.
struct ReplayEvaluation {
    std::vector<ModelResult> models;
    Vec y_test;
    std::string dataset_label;
};

ReplayEvaluation evaluate_run(const std::string& run_dir);

} // namespace aeelm
