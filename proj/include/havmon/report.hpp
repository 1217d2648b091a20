#pragma once

#include <optional>
#include <string>
#include <vector>

#include "havmon/io.hpp"
#include "havmon/stats.hpp"
#include "havmon/sysid.hpp"
#include "havmon/weighting.hpp"

namespace havmon {

struct SegmentExposure {
    std::size_t index = 0;
    double start_s = 0.0;
    double duration_s = 0.0;
    AxisRms raw;        // gravity-compensated, unweighted
    AxisRms weighted;   // after the frequency weighting (== raw when disabled)
    double ahv_raw = 0.0;
    double ahv_weighted = 0.0;
};

struct RecordingExposure {
    std::string sensor_id;
    std::string location;
    double rate_hz = 0.0;
    std::size_t n_samples = 0;
    std::vector<SegmentExposure> segments;
    double ahv_overall = 0.0;  // energy mean over segment totals
    double a8 = 0.0;
    std::string assessment;
    std::vector<std::string> warnings;
};

struct GainTable {
    std::vector<double> freq_hz;
    std::vector<double> gain_system;  // |G|
    std::vector<double> gain_noise;   // |H|
};

struct PairIdentification {
    std::string input_id;
    std::string output_id;
    std::string axis_in;
    std::string axis_out;
    BoxJenkinsModel model;
    FitReport fit;
    GainTable gains;
    std::string model_path;  // empty when no model file was written
};

struct TTestEntry {
    std::string label;
    TTestResult result;
    bool significant = false;
};

struct RegressionEntry {
    std::string label;
    RegressionResult result;
    bool significant = false;
};

struct StatsSection {
    std::vector<TTestEntry> t_tests;
    std::vector<RegressionEntry> regressions;
    std::vector<std::string> warnings;  // per-pair degeneracies land here
};

// The one report document every command produces. Deterministic given
// inputs and config: no timestamps, no environment echoes.
struct RunReport {
    std::string artifact = "havmon-report";
    int version = 1;
    std::string command;
    AnalysisConfig config;
    std::vector<RecordingExposure> recordings;
    std::vector<PairIdentification> pairs;
    std::optional<StatsSection> stats;
    std::vector<std::string> warnings;
};

// Canonical machine format: JSON, keys sorted, numbers at 15 significant
// digits, non-finite numbers as strings. Two reports are considered equal
// iff their canonical renderings are byte-identical.
std::string render_machine(const RunReport& report);

// Inverse of render_machine up to canonical rounding:
// render_machine(parse_machine(s)) == s for any canonical s.
RunReport parse_machine(const std::string& text);

std::string render_text(const RunReport& report);

// Plot-ready tables, one value column per curve.
std::string render_trace_csv(const PredictionTrace& trace, double rate_hz);
std::string render_gain_csv(const GainTable& gains);

}  // namespace havmon
