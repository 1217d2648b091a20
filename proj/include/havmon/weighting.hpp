#pragma once

#include <string>
#include <vector>

#include "havmon/filter.hpp"
#include "havmon/signal.hpp"

namespace havmon {

// Hand-arm frequency weighting; the default corners follow the Wh weighting
// of the ISO 5349 family. Band limiting is a 2nd-order high-pass at f1 and a 2nd-order
// low-pass at f2, both with Q = 1/sqrt(2); the a-v transition is
//   H(s) = (s + w3) * w4^2 / (w3 * (s^2 + w4 s / q4 + w4^2))
// which has unit gain at DC and rolls off above f3.
struct WeightingSpec {
    double f1_hz = 6.31;      // band-limit high-pass corner
    double f2_hz = 1258.9;    // band-limit low-pass corner
    double f3_hz = 15.915;    // a-v transition corner
    double f4_hz = 15.915;    // a-v resonance corner
    double q4 = 0.64;         // a-v resonance quality factor
    bool enabled = true;

    void validate() const;
};

struct DesignedWeighting {
    DigitalFilter filter;
    // Set when the rate's Nyquist is below f2 and the band-limit low-pass
    // was replaced by unity. Carried into reports as a warning.
    bool reduced_bandwidth = false;
};

// Magnitude of the analog prototype at f_hz. This is the reference the
// digital design is checked against.
double analog_weighting_magnitude(const WeightingSpec& spec, double f_hz);

// Discretizes the weighting by bilinear transform with per-corner
// prewarping. Throws RateTooLow when rate_hz <= 2 * f1.
DesignedWeighting design_weighting_filter(const WeightingSpec& spec, double rate_hz);

// Runs the filter over each axis independently, zero initial conditions.
TriaxialSeries apply_filter(const DigitalFilter& filter, const TriaxialSeries& series);

// --- Exposure metrics ---

struct AxisRms {
    double ahw_x = 0.0;
    double ahw_y = 0.0;
    double ahw_z = 0.0;
    std::size_t n = 0;  // samples per axis
};

enum class Assessment { BelowAction, AboveAction, AboveLimit };

const char* assessment_name(Assessment a);

struct ExposureThresholds {
    double action = 2.5;  // m/s^2, exposure action value on A(8)
    double limit = 5.0;   // m/s^2, exposure limit value on A(8)
};

// sqrt(mean(x^2)) over one segment channel.
double axis_rms(std::span<const double> samples);

// Root-sum-of-squares of the three per-axis weighted RMS values.
double vibration_total(double ahw_x, double ahw_y, double ahw_z);

// A(8): energy-equivalent exposure normalized to the reference duration.
double daily_exposure(double ahv, double exposure_duration_s,
                      double reference_duration_s = 28800.0);

// Boundary values belong to the higher category.
Assessment assess_limits(double a8, const ExposureThresholds& thresholds);

}  // namespace havmon
