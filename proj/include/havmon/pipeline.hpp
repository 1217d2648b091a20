#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "havmon/io.hpp"
#include "havmon/report.hpp"
#include "havmon/synth.hpp"

namespace havmon {

// Gravity removal, optional frequency weighting, segmentation, and exposure
// metrics for each recording. Filter state is per recording; errors are
// rethrown with the recording id attached.
RunReport cmd_analyze(const std::vector<TriaxialSeries>& recordings,
                      const AnalysisConfig& config);

struct IdentifyOutput {
    RunReport report;
    // One trace per fitted pair, same order as report.pairs.
    std::vector<std::pair<std::string, PredictionTrace>> traces;
};

// Per-axis transfer-function identification between an input and an output
// recording (axes paired per config). With decimate_to_match the faster
// recording is decimated to the slower rate when the ratio is integer;
// otherwise differing rates are a RateMismatch.
IdentifyOutput cmd_identify(const TriaxialSeries& input, const TriaxialSeries& output,
                            const AnalysisConfig& config, bool decimate_to_match = false);

// Writes model files, prediction traces, and gain tables into dir and
// records the model paths in the report.
void write_identify_artifacts(IdentifyOutput& out, const std::filesystem::path& dir);

// Statistics over the per-segment vibration totals of an analyze report:
// paired t-tests on co-located pairs, regressions along the arm chain.
// Degenerate pairs become warnings, not failures.
StatsSection cmd_stats(const RunReport& analyzed, const AnalysisConfig& config);

// Writes the synthetic bundle as recordings plus a ground-truth manifest;
// returns the manifest path. Identical seeds give identical bytes.
std::filesystem::path cmd_simulate(const ExperimentConfig& config, std::uint64_t seed,
                                   const std::filesystem::path& out_dir);

enum class ReportFormat { Machine, Text, Tables };

ReportFormat parse_report_format(const std::string& name);  // UnknownFormat

std::string cmd_report(const RunReport& report, ReportFormat format);

}  // namespace havmon
