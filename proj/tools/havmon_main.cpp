#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "havmon/pipeline.hpp"

namespace {

// Flag overrides beat the config file, which beats built-in defaults.
struct Overrides {
    std::optional<double> beta;
    std::optional<std::string> gravity_init;
    std::optional<double> window_s;
    std::optional<std::size_t> order;
    std::optional<std::size_t> delay;
    std::optional<std::size_t> max_iterations;
    std::optional<double> rel_tolerance;
    std::optional<double> significance;
    std::optional<double> action;
    std::optional<double> limit;
    std::optional<double> exposure_hours;
    bool no_gravity_removal = false;
    bool no_weighting = false;
};

void add_override_flags(CLI::App* cmd, Overrides& ov) {
    cmd->add_option("--beta", ov.beta, "gravity estimator weight (default 0.05)");
    cmd->add_option("--gravity-init", ov.gravity_init,
                    "gravity init policy: first_sample, zero or given");
    cmd->add_option("--window", ov.window_s, "segment window in seconds (default 10)");
    cmd->add_option("--order", ov.order, "model order for nb, na, nc, nd (default 20)");
    cmd->add_option("--delay", ov.delay, "input delay in samples (default 1)");
    cmd->add_option("--max-iterations", ov.max_iterations,
                    "optimizer iteration cap (default 200)");
    cmd->add_option("--rel-tolerance", ov.rel_tolerance,
                    "optimizer relative cost tolerance (default 1e-9)");
    cmd->add_option("--significance", ov.significance,
                    "significance level for the stats section (default 0.05)");
    cmd->add_option("--action", ov.action, "exposure action value in m/s^2 (default 2.5)");
    cmd->add_option("--limit", ov.limit, "exposure limit value in m/s^2 (default 5.0)");
    cmd->add_option("--exposure-hours", ov.exposure_hours,
                    "daily exposure duration; default is the recording length");
    cmd->add_flag("--no-gravity-removal", ov.no_gravity_removal,
                  "feed raw acceleration into the pipeline");
    cmd->add_flag("--no-weighting", ov.no_weighting, "skip the frequency weighting");
}

havmon::AnalysisConfig make_config(const std::optional<std::string>& config_path,
                                   const Overrides& ov) {
    std::optional<std::filesystem::path> p;
    if (config_path) p = *config_path;
    havmon::AnalysisConfig cfg = havmon::resolve_config(p);

    if (ov.beta) cfg.gravity.beta = *ov.beta;
    if (ov.gravity_init) {
        if (*ov.gravity_init == "first_sample") {
            cfg.gravity.init_policy = havmon::GravityInit::FirstSample;
        } else if (*ov.gravity_init == "zero") {
            cfg.gravity.init_policy = havmon::GravityInit::Zero;
        } else if (*ov.gravity_init == "given") {
            cfg.gravity.init_policy = havmon::GravityInit::Given;
        } else {
            throw havmon::Error(havmon::Errc::ParseError,
                                "unknown gravity init policy '" + *ov.gravity_init + "'");
        }
    }
    if (ov.window_s) cfg.window_s = *ov.window_s;
    if (ov.order) cfg.orders = {*ov.order, *ov.order, *ov.order, *ov.order};
    if (ov.delay) cfg.input_delay = *ov.delay;
    if (ov.max_iterations) cfg.fit_options.max_iterations = *ov.max_iterations;
    if (ov.rel_tolerance) cfg.fit_options.rel_tolerance = *ov.rel_tolerance;
    if (ov.significance) cfg.significance = *ov.significance;
    if (ov.action) cfg.thresholds.action = *ov.action;
    if (ov.limit) cfg.thresholds.limit = *ov.limit;
    if (ov.exposure_hours) cfg.exposure_duration_s = *ov.exposure_hours * 3600.0;
    if (ov.no_gravity_removal) cfg.gravity_removal = false;
    if (ov.no_weighting) cfg.weighting.enabled = false;
    cfg.validate();
    return cfg;
}

void emit(const std::string& content, const std::string& out_path) {
    if (out_path == "-") {
        std::cout << content;
    } else {
        havmon::write_file_atomic(out_path, content);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "havmon: hand-arm vibration exposure metrics and transfer-path "
        "identification for triaxial accelerometer recordings"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "havmon 1.0.0");

    std::optional<std::string> config_path;
    app.add_option("--config", config_path,
                   "JSON config file; $HAVMON_CONFIG is used when unset");

    // analyze
    auto* analyze = app.add_subcommand(
        "analyze", "exposure metrics (per-segment RMS, ahv, A(8)) per recording");
    std::vector<std::string> analyze_files;
    std::string analyze_out = "-";
    bool fail_on_limit = false;
    Overrides analyze_ov;
    analyze->add_option("recordings", analyze_files, "recording CSV paths")
        ->required()
        ->expected(-1);
    analyze->add_option("--out", analyze_out, "machine report path, - for stdout");
    analyze->add_flag("--fail-on-limit", fail_on_limit,
                      "exit 3 when any A(8) reaches the exposure limit");
    add_override_flags(analyze, analyze_ov);

    // identify
    auto* identify = app.add_subcommand(
        "identify", "fit per-axis transfer models between two recordings");
    std::string identify_in, identify_out_rec;
    std::string identify_out = "-";
    std::optional<std::string> identify_dir;
    bool decimate_to_match = false;
    bool strict = false;
    Overrides identify_ov;
    identify->add_option("--input", identify_in, "input (source) recording CSV")
        ->required();
    identify->add_option("--output", identify_out_rec, "output (response) recording CSV")
        ->required();
    identify->add_option("--out", identify_out, "machine report path, - for stdout");
    identify->add_option("--out-dir", identify_dir,
                         "directory for model files, traces and gain tables");
    identify->add_flag("--decimate-to-match", decimate_to_match,
                       "decimate the faster recording when rates differ");
    identify->add_flag("--strict", strict, "exit 2 when any fit fails to converge");
    add_override_flags(identify, identify_ov);

    // stats
    auto* stats = app.add_subcommand(
        "stats", "t-tests and regressions over an analyze report's segment table");
    std::string stats_report;
    std::string stats_out = "-";
    Overrides stats_ov;
    stats->add_option("--report", stats_report, "machine report from analyze")->required();
    stats->add_option("--out", stats_out, "machine report path, - for stdout");
    add_override_flags(stats, stats_ov);

    // simulate
    auto* simulate = app.add_subcommand(
        "simulate", "generate a seeded synthetic measurement campaign");
    std::string sim_dir;
    std::uint64_t sim_seed = 1;
    std::optional<double> sim_duration;
    simulate->add_option("--out-dir", sim_dir, "directory for recordings and manifest")
        ->required();
    simulate->add_option("--seed", sim_seed, "campaign seed (default 1)");
    simulate->add_option("--duration", sim_duration, "recording length in seconds");

    // report
    auto* report = app.add_subcommand("report", "re-render a machine report");
    std::string report_in;
    std::string report_format = "text";
    std::string report_out = "-";
    report->add_option("--in", report_in, "machine report path")->required();
    report->add_option("--format", report_format, "machine, text or tables");
    report->add_option("--out", report_out, "destination path, - for stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (analyze->parsed()) {
            const havmon::AnalysisConfig cfg = make_config(config_path, analyze_ov);
            std::vector<havmon::TriaxialSeries> recordings;
            recordings.reserve(analyze_files.size());
            for (const std::string& f : analyze_files) {
                recordings.push_back(havmon::load_recording(f));
            }
            const havmon::RunReport rep = havmon::cmd_analyze(recordings, cfg);
            emit(havmon::render_machine(rep), analyze_out);
            if (fail_on_limit) {
                for (const havmon::RecordingExposure& r : rep.recordings) {
                    if (r.assessment == "AboveLimit") return 3;
                }
            }
        } else if (identify->parsed()) {
            const havmon::AnalysisConfig cfg = make_config(config_path, identify_ov);
            const havmon::TriaxialSeries in = havmon::load_recording(identify_in);
            const havmon::TriaxialSeries out = havmon::load_recording(identify_out_rec);
            havmon::IdentifyOutput result =
                havmon::cmd_identify(in, out, cfg, decimate_to_match);
            if (identify_dir) havmon::write_identify_artifacts(result, *identify_dir);
            emit(havmon::render_machine(result.report), identify_out);
            if (strict) {
                for (const havmon::PairIdentification& p : result.report.pairs) {
                    if (!p.fit.converged) return 2;
                }
            }
        } else if (stats->parsed()) {
            const havmon::AnalysisConfig cfg = make_config(config_path, stats_ov);
            havmon::RunReport rep =
                havmon::parse_machine(havmon::read_text_file(stats_report));
            rep.command = "stats";
            rep.stats = havmon::cmd_stats(rep, cfg);
            emit(havmon::render_machine(rep), stats_out);
        } else if (simulate->parsed()) {
            havmon::ExperimentConfig cfg = havmon::default_experiment_config();
            if (sim_duration) cfg.tool.duration_s = *sim_duration;
            const std::filesystem::path manifest =
                havmon::cmd_simulate(cfg, sim_seed, sim_dir);
            std::cout << manifest.string() << "\n";
        } else if (report->parsed()) {
            const havmon::RunReport rep =
                havmon::parse_machine(havmon::read_text_file(report_in));
            emit(havmon::cmd_report(rep, havmon::parse_report_format(report_format)),
                 report_out);
        }
    } catch (const havmon::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
