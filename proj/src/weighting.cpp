#include "havmon/weighting.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace havmon {

namespace {

constexpr double kButterworthQ = 0.7071067811865476;  // 1/sqrt(2)

using complexd = std::complex<double>;

complexd analog_section(double B2, double B1, double B0, double A2, double A1, double A0,
                        complexd s) {
    return (B2 * s * s + B1 * s + B0) / (A2 * s * s + A1 * s + A0);
}

}  // namespace

void WeightingSpec::validate() const {
    if (f1_hz <= 0.0 || f2_hz <= 0.0 || f3_hz <= 0.0 || f4_hz <= 0.0 || q4 <= 0.0) {
        throw Error(Errc::InvalidSpec, "weighting corners and q4 must be > 0");
    }
    if (f1_hz >= f2_hz) {
        throw Error(Errc::InvalidSpec, "band-limit corners require f1 < f2");
    }
}

double analog_weighting_magnitude(const WeightingSpec& spec, double f_hz) {
    spec.validate();
    const double two_pi = 2.0 * std::numbers::pi;
    const complexd s{0.0, two_pi * f_hz};
    const double w1 = two_pi * spec.f1_hz;
    const double w2 = two_pi * spec.f2_hz;
    const double w3 = two_pi * spec.f3_hz;
    const double w4 = two_pi * spec.f4_hz;

    const complexd hp = analog_section(1, 0, 0, 1, w1 / kButterworthQ, w1 * w1, s);
    const complexd lp = analog_section(0, 0, w2 * w2, 1, w2 / kButterworthQ, w2 * w2, s);
    const complexd av = analog_section(0, w4 * w4 / w3, w4 * w4, 1, w4 / spec.q4,
                                       w4 * w4, s);
    return std::abs(hp * lp * av);
}

DesignedWeighting design_weighting_filter(const WeightingSpec& spec, double rate_hz) {
    spec.validate();
    if (rate_hz <= 2.0 * spec.f1_hz) {
        throw Error(Errc::RateTooLow, "rate " + std::to_string(rate_hz) +
                                          " Hz cannot realize a high-pass at " +
                                          std::to_string(spec.f1_hz) + " Hz");
    }

    std::vector<Biquad> sections;
    sections.push_back(design_highpass_section(spec.f1_hz, kButterworthQ, rate_hz));

    bool reduced = false;
    if (rate_hz / 2.0 > spec.f2_hz) {
        sections.push_back(design_lowpass_section(spec.f2_hz, kButterworthQ, rate_hz));
    } else {
        // The sensor's own Nyquist already band-limits harder than f2 would;
        // the section degrades to unity and the report carries a warning.
        reduced = true;
    }

    const double two_pi = 2.0 * std::numbers::pi;
    const double w3 = two_pi * spec.f3_hz;
    const double w4 = two_pi * spec.f4_hz;
    sections.push_back(bilinear_biquad(0.0, w4 * w4 / w3, w4 * w4, 1.0, w4 / spec.q4,
                                       w4 * w4, prewarp_k(spec.f4_hz, rate_hz)));

    return {DigitalFilter(std::move(sections), rate_hz), reduced};
}

TriaxialSeries apply_filter(const DigitalFilter& filter, const TriaxialSeries& series) {
    if (filter.rate_hz() != series.rate_hz()) {
        throw Error(Errc::RateMismatch,
                    "filter designed for " + std::to_string(filter.rate_hz()) +
                        " Hz applied to series at " + std::to_string(series.rate_hz()) +
                        " Hz");
    }
    std::vector<double> out[3];
    for (Axis a : kAxes) out[static_cast<int>(a)] = filter.apply(series.axis(a));
    return TriaxialSeries(series.meta(), series.t0(), std::move(out[0]),
                          std::move(out[1]), std::move(out[2]));
}

const char* assessment_name(Assessment a) {
    switch (a) {
        case Assessment::BelowAction: return "BelowAction";
        case Assessment::AboveAction: return "AboveAction";
        case Assessment::AboveLimit: return "AboveLimit";
    }
    return "?";
}

double axis_rms(std::span<const double> samples) {
    if (samples.empty()) throw Error(Errc::EmptySegment, "RMS of an empty segment");
    double sum = 0.0;
    for (double v : samples) sum += v * v;
    return std::sqrt(sum / static_cast<double>(samples.size()));
}

double vibration_total(double ahw_x, double ahw_y, double ahw_z) {
    if (ahw_x < 0.0 || ahw_y < 0.0 || ahw_z < 0.0) {
        throw Error(Errc::NegativeComponent, "per-axis RMS values must be >= 0");
    }
    return std::sqrt(ahw_x * ahw_x + ahw_y * ahw_y + ahw_z * ahw_z);
}

double daily_exposure(double ahv, double exposure_duration_s,
                      double reference_duration_s) {
    if (ahv < 0.0) throw Error(Errc::NegativeComponent, "ahv must be >= 0");
    if (exposure_duration_s <= 0.0 || reference_duration_s <= 0.0) {
        throw Error(Errc::NonPositiveDuration, "durations must be > 0");
    }
    return ahv * std::sqrt(exposure_duration_s / reference_duration_s);
}

Assessment assess_limits(double a8, const ExposureThresholds& thresholds) {
    if (!(thresholds.action > 0.0 && thresholds.action < thresholds.limit)) {
        throw Error(Errc::InvalidThresholds, "require 0 < action < limit");
    }
    if (a8 < thresholds.action) return Assessment::BelowAction;
    if (a8 < thresholds.limit) return Assessment::AboveAction;
    return Assessment::AboveLimit;
}

}  // namespace havmon
