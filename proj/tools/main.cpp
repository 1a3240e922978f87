#include "aeelm/core/csv.hpp"
#include "aeelm/core/errors.hpp"
#include "aeelm/core/kernels.hpp"
#include "aeelm/core/rng.hpp"
#include "aeelm/pipeline.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using namespace aeelm;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

PipelineConfig resolve_config(const CommonArgs& args) {
    PipelineConfig cfg;
    if (!args.config_path.empty()) cfg = load_config(args.config_path);
    if (args.seed_set) cfg.master_seed = args.seed;
    return cfg;
}

void add_common(CLI::App* cmd, CommonArgs& args, bool with_out) {
    cmd->add_option("--config", args.config_path, "config file (sectioned key=value, or a manifest.json to replay)");
    cmd->add_option("--seed", args.seed, "master seed (overrides the config)")
        ->each([&args](const std::string&) { args.seed_set = true; });
    if (with_out) cmd->add_option("--out", args.out_dir, "output directory")->required();
}

void print_model_table(const std::vector<ModelResult>& models) {
    std::printf("  %-8s %12s %12s %10s\n", "model", "NMSE", "MAPE(%)", "R2");
    for (const auto& m : models)
        std::printf("  %-8s %12.6f %12.4f %10.6f\n", m.name.c_str(), m.report.nmse,
                    m.report.mape_percent, m.report.r2);
}

void cmd_synth(const CommonArgs& args, std::size_t samples) {
    PipelineConfig cfg = resolve_config(args);
    if (samples) cfg.data.synth_samples = samples;
    PlantSpec spec = default_plant_spec(derive_seed(cfg.master_seed, kSeedSynth));
    spec.n_samples = cfg.data.synth_samples;
    const auto [ds, gt] = generate(spec);
    fs::create_directories(args.out_dir);
    write_csv(ds, args.out_dir + "/synth.csv");
    write_ground_truth_json(gt, args.out_dir + "/ground_truth.json");
    std::printf("wrote %zu samples x %zu channels to %s/synth.csv (+ ground_truth.json)\n",
                ds.n_samples(), ds.channels.size(), args.out_dir.c_str());
}

void cmd_analyze_mi(const CommonArgs& args, const std::string& data_path,
                    const std::string& target, std::size_t bins, double threshold) {
    PipelineConfig cfg = resolve_config(args);
    if (!data_path.empty()) {
        cfg.data.source = "csv";
        cfg.data.path = data_path;
    }
    if (!target.empty()) cfg.data.target = target;
    if (bins) cfg.mi.bins = bins;
    if (threshold > 0.0) cfg.mi.threshold = threshold;

    const LoadedData data = load_pipeline_data(cfg);
    const FeatureSelection sel = select_features(data.ds, cfg.mi.threshold, cfg.mi.bins);

    std::printf("MI against %s (threshold %.2f on normalized MI, %zu samples)\n",
                cfg.data.target.c_str(), sel.threshold, data.ds.n_samples());
    std::printf("  %-8s %12s %14s %9s\n", "channel", "MI (nats)", "normalized MI", "selected");
    for (const auto& [name, est] : sel.scores) {
        const bool on = std::find(sel.selected.begin(), sel.selected.end(), name) != sel.selected.end();
        std::printf("  %-8s %12.4f %14.4f %9s\n", name.c_str(), est.raw_mi, est.normalized_mi,
                    on ? "yes" : "no");
    }
    std::printf("selected %zu of %zu channels\n", sel.selected.size(), sel.scores.size());

    if (!args.out_dir.empty()) {
        fs::create_directories(args.out_dir);
        std::vector<std::vector<std::string>> rows;
        for (const auto& [name, est] : sel.scores) {
            const bool on =
                std::find(sel.selected.begin(), sel.selected.end(), name) != sel.selected.end();
            rows.push_back({name, csv::format_double(est.raw_mi),
                            csv::format_double(est.normalized_mi), on ? "1" : "0"});
        }
        csv::write_file(args.out_dir + "/mi_report.csv",
                        {"channel", "raw_mi_nats", "normalized_mi", "selected"}, rows);
        std::printf("wrote %s/mi_report.csv\n", args.out_dir.c_str());
    }
}

void cmd_scan_delay(const CommonArgs& args, const std::string& data_path,
                    const std::string& target, std::size_t bins, std::size_t d_max) {
    PipelineConfig cfg = resolve_config(args);
    if (!data_path.empty()) {
        cfg.data.source = "csv";
        cfg.data.path = data_path;
    }
    if (!target.empty()) cfg.data.target = target;
    if (bins) cfg.mi.bins = bins;
    if (d_max) cfg.delay.d_max = d_max;

    const LoadedData data = load_pipeline_data(cfg);
    const DelayTable table = scan_delays(data.ds, data.ds.channel_names(), cfg.delay.d_max, cfg.mi.bins);

    std::printf("delay scan against %s, d_max = %zu samples\n", cfg.data.target.c_str(),
                cfg.delay.d_max);
    std::printf("  %-8s %14s %12s %12s\n", "channel", "delay (min)", "MI at best", "MI at 0");
    std::vector<std::vector<std::string>> rows, curve_rows;
    for (const auto& [name, scan] : table.entries) {
        const double minutes = static_cast<double>(scan.delay) * data.ds.sample_interval_minutes;
        std::printf("  %-8s %14.0f %12.4f %12.4f\n", name.c_str(), minutes,
                    scan.curve[scan.delay].normalized_mi, scan.curve[0].normalized_mi);
        rows.push_back({name, csv::format_double(minutes),
                        csv::format_double(scan.curve[scan.delay].normalized_mi),
                        csv::format_double(scan.curve[0].normalized_mi)});
        for (std::size_t d = 0; d < scan.curve.size(); ++d)
            curve_rows.push_back(
                {name, csv::format_double(static_cast<double>(d) * data.ds.sample_interval_minutes),
                 csv::format_double(scan.curve[d].raw_mi),
                 csv::format_double(scan.curve[d].normalized_mi)});
    }
    if (!args.out_dir.empty()) {
        fs::create_directories(args.out_dir);
        csv::write_file(args.out_dir + "/delay_report.csv",
                        {"channel", "delay_minutes", "mi_at_best", "mi_at_zero"}, rows);
        csv::write_file(args.out_dir + "/delay_curves.csv",
                        {"channel", "delay_minutes", "raw_mi_nats", "normalized_mi"}, curve_rows);
        std::printf("wrote %s/delay_report.csv and delay_curves.csv\n", args.out_dir.c_str());
    }
}

void cmd_train(const CommonArgs& args) {
    const PipelineConfig cfg = resolve_config(args);
    const PipelineRunResult run = run_pipeline(cfg);
    write_run_artifacts(run, cfg, args.out_dir);
    const auto& r = run.result;
    std::printf("dataset %s: %zu channels -> %zu selected -> %zu lagged features -> %zu AE features\n",
                cfg.dataset_label().c_str(), run.data.ds.channels.size(), r.selected.size(),
                r.selected.size(), r.feature_dim);
    std::printf("hidden size %zu, ELM K = %zu, %zu train rows, %zu test rows, %zu clipped values\n",
                r.hidden_size, r.elm_k, r.train_rows, r.test_rows, r.clip_count);
    print_model_table(r.models);
    std::printf("artifacts written to %s (kernels: %s)\n", args.out_dir.c_str(),
                kern::backend_name(kern::active_backend()));
}

void cmd_evaluate(const std::string& run_dir) {
    const ReplayEvaluation eval = evaluate_run(run_dir);
    std::printf("re-evaluated %s on %zu test rows\n", eval.dataset_label.c_str(),
                eval.y_test.size());
    print_model_table(eval.models);
}

void cmd_ablate(const CommonArgs& args) {
    const PipelineConfig cfg = resolve_config(args);
    const AblationReport report = run_ablation(cfg);
    write_ablation_artifacts(report, cfg, args.out_dir);
    for (const auto& v : report.variants) {
        std::printf("variant %-9s (%.2fs):\n", v.variant.c_str(), v.total_seconds);
        print_model_table(v.models);
    }
    std::printf("artifacts written to %s\n", args.out_dir.c_str());
}

void cmd_report(const std::string& run_dir) {
    const std::string ablation_path = run_dir + "/ablation_report.csv";
    const std::string eval_path = run_dir + "/evaluation.json";
    if (fs::exists(ablation_path)) {
        const csv::Table t = csv::read_file(ablation_path);
        std::printf("%-10s %-8s %12s %12s %10s\n", "variant", "model", "NMSE", "MAPE(%)", "R2");
        for (const auto& row : t.rows)
            std::printf("%-10s %-8s %12s %12s %10s\n", row[0].c_str(), row[1].c_str(),
                        row[2].substr(0, 12).c_str(), row[3].substr(0, 12).c_str(),
                        row[4].substr(0, 10).c_str());
        return;
    }
    if (fs::exists(eval_path)) {
        std::ifstream in(eval_path);
        std::ostringstream ss;
        ss << in.rdbuf();
        std::printf("%s\n", ss.str().c_str());
        return;
    }
    throw DataError("no evaluation.json or ablation_report.csv under " + run_dir);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"aeelm - soft-sensor toolkit: MI feature selection, delay reconstruction, "
                 "autoencoder feature extraction, ELM regression"};
    app.require_subcommand(1);

    CommonArgs synth_args, mi_args, delay_args, train_args, ablate_args;
    std::size_t synth_samples = 0;
    std::string mi_data, mi_target, delay_data, delay_target, eval_run, report_run;
    std::size_t mi_bins = 0, delay_bins = 0, delay_dmax = 0;
    double mi_threshold = 0.0;

    auto* synth = app.add_subcommand("synth", "generate a synthetic plant CSV + ground-truth sidecar");
    add_common(synth, synth_args, true);
    synth->add_option("--samples", synth_samples, "number of samples");

    auto* analyze = app.add_subcommand("analyze-mi", "score channels against the target by MI");
    add_common(analyze, mi_args, false);
    analyze->add_option("--out", mi_args.out_dir, "directory for mi_report.csv");
    analyze->add_option("--data", mi_data, "CSV file (overrides config data source)");
    analyze->add_option("--target", mi_target, "target column name");
    analyze->add_option("--bins", mi_bins, "histogram bins (default ceil(sqrt(n)))");
    analyze->add_option("--threshold", mi_threshold, "selection threshold on normalized MI");

    auto* scan = app.add_subcommand("scan-delay", "find the MI-maximizing delay per channel");
    add_common(scan, delay_args, false);
    scan->add_option("--out", delay_args.out_dir, "directory for delay_report.csv + delay_curves.csv");
    scan->add_option("--data", delay_data, "CSV file (overrides config data source)");
    scan->add_option("--target", delay_target, "target column name");
    scan->add_option("--bins", delay_bins, "histogram bins");
    scan->add_option("--dmax", delay_dmax, "largest candidate delay in samples");

    auto* train = app.add_subcommand("train", "run the full pipeline and write models + reports");
    add_common(train, train_args, true);

    auto* evaluate = app.add_subcommand("evaluate", "re-score the persisted models of a finished run");
    evaluate->add_option("--run", eval_run, "run directory (with manifest.json and models/)")->required();

    auto* ablate = app.add_subcommand("ablate", "run the full/no-delay/no-mi/no-ae variants");
    add_common(ablate, ablate_args, true);

    auto* report = app.add_subcommand("report", "print the tables of a finished run directory");
    report->add_option("--run", report_run, "run directory")->required();

    try {
        app.parse(argc, argv);
        if (synth->parsed()) cmd_synth(synth_args, synth_samples);
        if (analyze->parsed()) cmd_analyze_mi(mi_args, mi_data, mi_target, mi_bins, mi_threshold);
        if (scan->parsed()) cmd_scan_delay(delay_args, delay_data, delay_target, delay_bins, delay_dmax);
        if (train->parsed()) cmd_train(train_args);
        if (evaluate->parsed()) cmd_evaluate(eval_run);
        if (ablate->parsed()) cmd_ablate(ablate_args);
        if (report->parsed()) cmd_report(report_run);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const NumericError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
