#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "havmon/errors.hpp"

namespace havmon {

// All accelerations are stored in m/s^2. Conversion from g happens at
// ingestion only (see io module).
inline constexpr double kGravity = 9.80665;

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    bool operator==(const Vec3& o) const = default;
};

enum class Axis { X = 0, Y = 1, Z = 2 };

inline constexpr Axis kAxes[3] = {Axis::X, Axis::Y, Axis::Z};

const char* axis_name(Axis a);

// Body / tool positions used in the measurement setup. The set is closed:
// unknown location strings are a parse error.
enum class Location {
    Tool,
    HandRT,
    HandLT,
    ForearmRT,
    ForearmLT,
    UpperArmRT,
    UpperArmLT,
    NearUpperArmRT,
};

const char* location_name(Location loc);
Location parse_location(const std::string& name);  // throws ParseError

struct SensorMeta {
    std::string sensor_id;
    Location location = Location::Tool;
    double rate_hz = 0.0;   // samples/second, > 0
    double range_g = 0.0;   // saturation magnitude in g, > 0
    std::optional<double> bandwidth_hz;  // internal low-pass corner; may exceed Nyquist

    void validate() const;  // throws InvalidSpec on violated invariants
};

// Uniformly sampled triaxial acceleration record. Samples are rate-implicit:
// sample i sits at t0 + i / meta.rate_hz. Axes are stored as separate
// contiguous arrays since nearly all downstream work is per-axis.
class TriaxialSeries {
public:
    TriaxialSeries() = default;
    TriaxialSeries(SensorMeta meta, double t0, std::vector<double> ax,
                   std::vector<double> ay, std::vector<double> az);

    const SensorMeta& meta() const { return meta_; }
    SensorMeta& meta() { return meta_; }
    double t0() const { return t0_; }
    double rate_hz() const { return meta_.rate_hz; }
    std::size_t size() const { return ax_.size(); }
    bool empty() const { return ax_.empty(); }
    double duration_s() const { return static_cast<double>(size()) / meta_.rate_hz; }

    std::span<const double> axis(Axis a) const;
    Vec3 sample(std::size_t i) const { return {ax_[i], ay_[i], az_[i]}; }

    bool operator==(const TriaxialSeries& o) const;

private:
    SensorMeta meta_;
    double t0_ = 0.0;
    std::vector<double> ax_, ay_, az_;
};

enum class TailPolicy {
    Drop,    // discard the trailing partial window (default)
    Strict,  // same, but WindowLongerThanSeries if zero segments result
};

struct Segment {
    std::string source_id;     // sensor_id of the originating series
    std::size_t start_index = 0;
    std::size_t length = 0;    // round(duration_s * rate_hz)
    double duration_s = 0.0;
};

// Enforces the series invariants: nonempty, all components finite.
// Input samples are interleaved per axis; values already in m/s^2.
TriaxialSeries validate_series(const std::vector<Vec3>& raw, const SensorMeta& meta,
                               double t0 = 0.0);

// Consecutive non-overlapping windows from the start of the series.
std::vector<Segment> segment(const TriaxialSeries& series, double window_s,
                             TailPolicy policy = TailPolicy::Drop);

// Per-axis samples of one segment.
std::span<const double> segment_axis(const TriaxialSeries& series, const Segment& seg,
                                     Axis a);

// Integer-factor rate reduction. With antialias_on, a low-pass at
// 0.4 * (new rate) is applied before sample dropping.
TriaxialSeries decimate(const TriaxialSeries& series, int factor, bool antialias_on);

// Trims both series to min(|a|, |b|) by dropping tail samples.
std::pair<TriaxialSeries, TriaxialSeries> truncate_to_common(const TriaxialSeries& a,
                                                             const TriaxialSeries& b);

}  // namespace havmon
