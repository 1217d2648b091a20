#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "havmon/filter.hpp"
#include "havmon/signal.hpp"

namespace havmon {

// All synthetic data is a pure function of (spec, seed). The generator is
// mt19937_64 (bit-exact per the C++ standard); uniform and normal draws are
// derived here explicitly instead of through std:: distributions, whose
// output is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform();  // [0, 1), 53-bit resolution
    double normal();   // standard normal via Box-Muller

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Stream-splitting helper so each link and sensor gets its own generator.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// Rotary-hammer stand-in: periodic decaying half-sine impacts, harmonics of
// the rotation frequency, and broadband noise.
struct ToolSignalSpec {
    double impact_rate_hz = 45.0;    // hammer mechanism blows per second
    double rotation_hz = 15.0;
    double impact_amplitude = 60.0;  // m/s^2 peak per blow
    double impact_decay_s = 0.004;   // burst time constant
    std::vector<double> harmonic_amplitudes = {8.0, 4.0, 2.0};
    double broadband_noise_rms = 1.0;  // m/s^2
    double duration_s = 60.0;
    double rate_hz = 1600.0;
    std::uint64_t seed = 0;

    void validate() const;
};

// One link of the arm chain: a second-order attenuator plus seeded link
// noise (AR(1)-colored when noise_ar1 != 0), and an optional hard clipper
// that pushes the truth outside the linear model class.
struct ArmStage {
    Biquad filter;
    double rate_hz = 1600.0;
    double noise_rms = 0.0;
    double noise_ar1 = 0.0;  // pole of the link-noise coloring, in [0, 1)
    std::optional<double> clip_level;

    void validate() const;
    double dc_gain() const;
};

// Resonant low-pass attenuator: DC gain, corner f0, quality q. With
// q <= 1/sqrt(2) the response peaks at DC, so dc_gain bounds the whole band.
ArmStage make_attenuator_stage(double f0_hz, double q, double dc_gain, double rate_hz,
                               double noise_rms = 0.0, double noise_ar1 = 0.0);

struct ArmModelSpec {
    ArmStage hand_from_tool;
    ArmStage forearm_from_hand;
    ArmStage upperarm_from_forearm;
};

struct SensorModelSpec {
    SensorMeta meta;
    double noise_rms = 0.0;        // m/s^2, additive white
    double quantization_step = 0.0;  // m/s^2, 0 disables
    Vec3 gravity_vector{0.0, 0.0, kGravity};  // zero allowed for identity checks

    void validate() const;
};

struct ExperimentConfig {
    ToolSignalSpec tool;
    ArmModelSpec arm;
    std::vector<SensorModelSpec> sensors;
};

struct ExperimentBundle {
    TriaxialSeries true_tool;
    TriaxialSeries true_hand;
    TriaxialSeries true_forearm;
    TriaxialSeries true_upperarm;
    std::vector<TriaxialSeries> observed;  // one per configured sensor
    ArmModelSpec ground_truth;
    std::uint64_t seed = 0;
};

TriaxialSeries gen_tool_signal(const ToolSignalSpec& spec);

// Applies the stage filter and adds seeded link noise.
TriaxialSeries propagate(const ArmStage& stage, const TriaxialSeries& input,
                         std::uint64_t seed);

// Measurement model: gravity, internal bandwidth filter, anti-aliased
// decimation to the sensor rate, additive noise, quantization, range clip.
TriaxialSeries sensor_observe(const SensorModelSpec& spec,
                              const TriaxialSeries& true_signal, std::uint64_t seed);

ExperimentBundle make_experiment(const ExperimentConfig& config, std::uint64_t seed);

// The eight-sensor setup used by the CLI and the end-to-end tests: ground
// truth at the tool-spec rate, body sensors at 400 Hz, one 200 Hz
// bandwidth-limited unit next to UpperArmRT.
ExperimentConfig default_experiment_config();

}  // namespace havmon
