#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "havmon/gravity.hpp"
#include "havmon/signal.hpp"
#include "havmon/sysid.hpp"
#include "havmon/weighting.hpp"

namespace havmon {

// Flat key=value sidecar carried next to each recording CSV. Keys beyond
// the recognized set are preserved so raw sensor exports work unmodified.
using Sidecar = std::map<std::string, std::string>;

// '#' starts a comment; blank lines are skipped; duplicate keys are a
// ParseError with the offending line number.
Sidecar parse_sidecar(const std::string& text);
std::string render_sidecar(const Sidecar& kv);

// The sidecar sits next to the CSV with extension ".meta".
std::filesystem::path sidecar_path_for(const std::filesystem::path& csv_path);

// Reads CSV (3 columns ax,ay,az or 4 with a leading time column) plus its
// sidecar. A time column must be uniform within 1 ppm of its mean spacing
// (NonUniformTime otherwise); it only contributes the start time. Values
// in g are converted to m/s^2 according to the sidecar "units" key.
TriaxialSeries load_recording(const std::filesystem::path& csv_path,
                              const std::filesystem::path& meta_path);
TriaxialSeries load_recording(const std::filesystem::path& csv_path);

// Writes CSV at full double precision plus the sidecar (units m/s2).
// extra entries land in the sidecar untouched.
void save_recording(const TriaxialSeries& series, const std::filesystem::path& csv_path,
                    const Sidecar& extra = {});

// Everything the pipeline commands need, file-loadable. Defaults follow
// the reference measurement protocol: beta 0.05, 10 s windows, order 20.
struct AnalysisConfig {
    GravityEstimatorConfig gravity;
    bool gravity_removal = true;
    WeightingSpec weighting;
    double window_s = 10.0;
    ExposureThresholds thresholds;
    // 0 means "the recording is the whole daily exposure".
    double exposure_duration_s = 0.0;
    FitOrders orders{20, 20, 20, 20};
    FitOptions fit_options;
    std::size_t input_delay = 1;
    // pairing[input axis] = output axis used by identification.
    std::array<Axis, 3> pairing = {Axis::X, Axis::Y, Axis::Z};
    double significance = 0.05;

    void validate() const;
};

// Strict JSON config: unknown keys are a ParseError naming the key, so a
// typo cannot silently fall back to a default.
AnalysisConfig load_config(const std::filesystem::path& path);

// Precedence: explicit path, then $HAVMON_CONFIG, then built-in defaults.
AnalysisConfig resolve_config(const std::optional<std::filesystem::path>& cli_path);

std::string read_text_file(const std::filesystem::path& path);  // IoError

// Write-temp-then-rename so readers never observe a partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace havmon
