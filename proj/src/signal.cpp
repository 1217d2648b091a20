#include "havmon/signal.hpp"

#include <cmath>
#include <utility>

#include "havmon/filter.hpp"

namespace havmon {

const char* axis_name(Axis a) {
    switch (a) {
        case Axis::X: return "x";
        case Axis::Y: return "y";
        case Axis::Z: return "z";
    }
    return "?";
}

const char* location_name(Location loc) {
    switch (loc) {
        case Location::Tool: return "Tool";
        case Location::HandRT: return "HandRT";
        case Location::HandLT: return "HandLT";
        case Location::ForearmRT: return "ForearmRT";
        case Location::ForearmLT: return "ForearmLT";
        case Location::UpperArmRT: return "UpperArmRT";
        case Location::UpperArmLT: return "UpperArmLT";
        case Location::NearUpperArmRT: return "NearUpperArmRT";
    }
    return "?";
}

Location parse_location(const std::string& name) {
    static constexpr Location all[] = {
        Location::Tool,       Location::HandRT,     Location::HandLT,
        Location::ForearmRT,  Location::ForearmLT,  Location::UpperArmRT,
        Location::UpperArmLT, Location::NearUpperArmRT,
    };
    for (Location loc : all) {
        if (name == location_name(loc)) return loc;
    }
    throw Error(Errc::ParseError, "unknown sensor location '" + name + "'");
}

void SensorMeta::validate() const {
    if (rate_hz <= 0.0) throw Error(Errc::InvalidSpec, "rate_hz must be > 0");
    if (range_g <= 0.0) throw Error(Errc::InvalidSpec, "range_g must be > 0");
    if (bandwidth_hz && *bandwidth_hz <= 0.0) {
        throw Error(Errc::InvalidSpec, "bandwidth_hz must be > 0 when present");
    }
}

TriaxialSeries::TriaxialSeries(SensorMeta meta, double t0, std::vector<double> ax,
                               std::vector<double> ay, std::vector<double> az)
    : meta_(std::move(meta)), t0_(t0), ax_(std::move(ax)), ay_(std::move(ay)),
      az_(std::move(az)) {
    meta_.validate();
    if (ax_.size() != ay_.size() || ay_.size() != az_.size()) {
        throw Error(Errc::LengthMismatch, "axis arrays must have equal length");
    }
}

std::span<const double> TriaxialSeries::axis(Axis a) const {
    switch (a) {
        case Axis::X: return ax_;
        case Axis::Y: return ay_;
        case Axis::Z: return az_;
    }
    return {};
}

bool TriaxialSeries::operator==(const TriaxialSeries& o) const {
    return meta_.sensor_id == o.meta_.sensor_id && meta_.location == o.meta_.location &&
           meta_.rate_hz == o.meta_.rate_hz && t0_ == o.t0_ && ax_ == o.ax_ &&
           ay_ == o.ay_ && az_ == o.az_;
}

TriaxialSeries validate_series(const std::vector<Vec3>& raw, const SensorMeta& meta,
                               double t0) {
    meta.validate();
    if (raw.empty()) throw Error(Errc::EmptyInput, "recording has no samples");

    std::vector<double> ax, ay, az;
    ax.reserve(raw.size());
    ay.reserve(raw.size());
    az.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const Vec3& v = raw[i];
        if (!std::isfinite(v.x) || !std::isfinite(v.y) || !std::isfinite(v.z)) {
            throw Error(Errc::NonFiniteSample,
                        "non-finite acceleration at sample " + std::to_string(i));
        }
        ax.push_back(v.x);
        ay.push_back(v.y);
        az.push_back(v.z);
    }
    return TriaxialSeries(meta, t0, std::move(ax), std::move(ay), std::move(az));
}

std::vector<Segment> segment(const TriaxialSeries& series, double window_s,
                             TailPolicy policy) {
    if (window_s <= 0.0) throw Error(Errc::InvalidSpec, "window_s must be > 0");

    const auto length =
        static_cast<std::size_t>(std::llround(window_s * series.rate_hz()));
    if (length == 0) throw Error(Errc::InvalidSpec, "window shorter than one sample");

    std::vector<Segment> out;
    for (std::size_t start = 0; start + length <= series.size(); start += length) {
        out.push_back({series.meta().sensor_id, start, length, window_s});
    }
    if (out.empty() && policy == TailPolicy::Strict) {
        throw Error(Errc::WindowLongerThanSeries,
                    "window of " + std::to_string(window_s) + " s exceeds series of " +
                        std::to_string(series.duration_s()) + " s");
    }
    return out;
}

std::span<const double> segment_axis(const TriaxialSeries& series, const Segment& seg,
                                     Axis a) {
    if (seg.start_index + seg.length > series.size()) {
        throw Error(Errc::LengthMismatch, "segment extends past series end");
    }
    return series.axis(a).subspan(seg.start_index, seg.length);
}

TriaxialSeries decimate(const TriaxialSeries& series, int factor, bool antialias_on) {
    if (factor < 1) throw Error(Errc::InvalidFactor, "factor must be an integer >= 1");
    if (factor == 1) return series;

    const double new_rate = series.rate_hz() / factor;

    // 4th-order Butterworth low-pass at 0.4 * new rate (two cascaded sections).
    DigitalFilter antialias(
        {design_lowpass_section(0.4 * new_rate, 0.5411961, series.rate_hz()),
         design_lowpass_section(0.4 * new_rate, 1.3065630, series.rate_hz())},
        series.rate_hz());

    std::vector<double> out[3];
    for (Axis a : kAxes) {
        std::span<const double> in = series.axis(a);
        std::vector<double> filtered;
        if (antialias_on) filtered = antialias.apply(in);
        const std::span<const double> src = antialias_on ? filtered : in;
        auto& dst = out[static_cast<int>(a)];
        const std::size_t n_out = src.size() / factor;
        dst.reserve(n_out);
        for (std::size_t k = 0; k < n_out; ++k) dst.push_back(src[k * factor]);
    }

    SensorMeta meta = series.meta();
    meta.rate_hz = new_rate;
    return TriaxialSeries(meta, series.t0(), std::move(out[0]), std::move(out[1]),
                          std::move(out[2]));
}

std::pair<TriaxialSeries, TriaxialSeries> truncate_to_common(const TriaxialSeries& a,
                                                             const TriaxialSeries& b) {
    if (a.rate_hz() != b.rate_hz()) {
        throw Error(Errc::RateMismatch, "cannot pair series sampled at " +
                                            std::to_string(a.rate_hz()) + " and " +
                                            std::to_string(b.rate_hz()) + " Hz");
    }
    const std::size_t n = std::min(a.size(), b.size());

    auto cut = [n](const TriaxialSeries& s) {
        std::vector<double> ax(s.axis(Axis::X).begin(), s.axis(Axis::X).begin() + n);
        std::vector<double> ay(s.axis(Axis::Y).begin(), s.axis(Axis::Y).begin() + n);
        std::vector<double> az(s.axis(Axis::Z).begin(), s.axis(Axis::Z).begin() + n);
        return TriaxialSeries(s.meta(), s.t0(), std::move(ax), std::move(ay),
                              std::move(az));
    };
    return {cut(a), cut(b)};
}

}  // namespace havmon
