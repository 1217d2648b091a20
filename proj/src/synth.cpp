#include "havmon/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace havmon {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> colored_noise(std::size_t n, double rms, double ar1, Rng& rng) {
    std::vector<double> out(n, 0.0);
    if (rms <= 0.0) return out;
    // Innovation variance scaled so the stationary output RMS matches.
    const double innov = rms * std::sqrt(1.0 - ar1 * ar1);
    double prev = 0.0;
    for (double& v : out) {
        prev = ar1 * prev + innov * rng.normal();
        v = prev;
    }
    return out;
}

}  // namespace

double Rng::uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // Box-Muller; u1 shifted into (0, 1] so the log is finite.
    const double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(kTwoPi * u2);
    have_spare_ = true;
    return r * std::cos(kTwoPi * u2);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 finalizer over seed xor stream.
    std::uint64_t z = seed ^ (stream * 0x9e3779b97f4a7c15ULL);
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

void ToolSignalSpec::validate() const {
    if (rate_hz <= 0.0 || duration_s <= 0.0) {
        throw Error(Errc::InvalidSpec, "tool signal needs positive rate and duration");
    }
    if (rate_hz <= 2.0 * rotation_hz) {
        throw Error(Errc::InvalidSpec, "rate must exceed twice the rotation frequency");
    }
    if (impact_rate_hz < 0.0 || rotation_hz < 0.0 || impact_amplitude < 0.0 ||
        broadband_noise_rms < 0.0 || impact_decay_s <= 0.0) {
        throw Error(Errc::InvalidSpec, "tool signal amplitudes and rates must be >= 0");
    }
    for (double a : harmonic_amplitudes) {
        if (a < 0.0) throw Error(Errc::InvalidSpec, "harmonic amplitudes must be >= 0");
    }
}

void ArmStage::validate() const {
    if (rate_hz <= 0.0) throw Error(Errc::InvalidSpec, "stage rate must be > 0");
    if (!filter.stable()) {
        throw Error(Errc::UnstableStage, "arm stage filter is unstable");
    }
    if (noise_rms < 0.0 || noise_ar1 < 0.0 || noise_ar1 >= 1.0) {
        throw Error(Errc::InvalidSpec, "stage noise_rms >= 0 and noise_ar1 in [0, 1)");
    }
}

double ArmStage::dc_gain() const {
    return (filter.b0 + filter.b1 + filter.b2) / (1.0 + filter.a1 + filter.a2);
}

ArmStage make_attenuator_stage(double f0_hz, double q, double dc_gain, double rate_hz,
                               double noise_rms, double noise_ar1) {
    if (dc_gain <= 0.0 || dc_gain > 1.0) {
        throw Error(Errc::InvalidSpec, "attenuator DC gain must lie in (0, 1]");
    }
    Biquad biq = design_lowpass_section(f0_hz, q, rate_hz);
    biq.b0 *= dc_gain;
    biq.b1 *= dc_gain;
    biq.b2 *= dc_gain;
    ArmStage stage;
    stage.filter = biq;
    stage.rate_hz = rate_hz;
    stage.noise_rms = noise_rms;
    stage.noise_ar1 = noise_ar1;
    stage.validate();
    return stage;
}

void SensorModelSpec::validate() const {
    meta.validate();
    if (noise_rms < 0.0 || quantization_step < 0.0) {
        throw Error(Errc::InvalidSpec, "sensor noise and quantization must be >= 0");
    }
    const double g = std::sqrt(gravity_vector.x * gravity_vector.x +
                               gravity_vector.y * gravity_vector.y +
                               gravity_vector.z * gravity_vector.z);
    if (g != 0.0 && std::abs(g - kGravity) > 0.01 * kGravity) {
        throw Error(Errc::InvalidSpec,
                    "gravity vector magnitude must be ~9.80665 m/s^2 (or zero)");
    }
}

TriaxialSeries gen_tool_signal(const ToolSignalSpec& spec) {
    spec.validate();
    const auto n = static_cast<std::size_t>(std::llround(spec.duration_s * spec.rate_hz));
    if (n == 0) throw Error(Errc::InvalidSpec, "duration shorter than one sample");

    Rng rng(derive_seed(spec.seed, 0x746f6f6cULL));  // "tool"
    const double dt = 1.0 / spec.rate_hz;
    const double burst_len = 2.0 * spec.impact_decay_s;

    std::vector<double> axes[3];
    for (auto& v : axes) v.assign(n, 0.0);

    for (int ai = 0; ai < 3; ++ai) {
        auto& out = axes[ai];
        // Fixed per-axis phases decorrelate the axes without touching RMS.
        const double axis_phase = ai * kTwoPi / 3.0;

        if (spec.impact_amplitude > 0.0 && spec.impact_rate_hz > 0.0) {
            const double period = 1.0 / spec.impact_rate_hz;
            for (std::size_t i = 0; i < n; ++i) {
                const double t = i * dt;
                const double tau = std::fmod(t, period);
                if (tau < burst_len) {
                    out[i] += spec.impact_amplitude * std::exp(-tau / spec.impact_decay_s) *
                              std::sin(std::numbers::pi * tau / burst_len);
                }
            }
        }
        for (std::size_t h = 0; h < spec.harmonic_amplitudes.size(); ++h) {
            const double amp = spec.harmonic_amplitudes[h];
            if (amp == 0.0) continue;
            const double f = spec.rotation_hz * static_cast<double>(h + 1);
            const double phase = axis_phase + 0.37 * static_cast<double>(h);
            for (std::size_t i = 0; i < n; ++i) {
                out[i] += amp * std::sin(kTwoPi * f * i * dt + phase);
            }
        }
        if (spec.broadband_noise_rms > 0.0) {
            for (std::size_t i = 0; i < n; ++i) {
                out[i] += spec.broadband_noise_rms * rng.normal();
            }
        }
    }

    SensorMeta meta;
    meta.sensor_id = "synthetic-tool";
    meta.location = Location::Tool;
    meta.rate_hz = spec.rate_hz;
    meta.range_g = 200.0;
    return TriaxialSeries(meta, 0.0, std::move(axes[0]), std::move(axes[1]),
                          std::move(axes[2]));
}

TriaxialSeries propagate(const ArmStage& stage, const TriaxialSeries& input,
                         std::uint64_t seed) {
    stage.validate();
    if (stage.rate_hz != input.rate_hz()) {
        throw Error(Errc::RateMismatch, "stage designed for a different sample rate");
    }
    DigitalFilter f({stage.filter}, stage.rate_hz);
    Rng rng(derive_seed(seed, 0x6c696e6bULL));  // "link"

    std::vector<double> out[3];
    for (Axis a : kAxes) {
        std::vector<double> y = f.apply(input.axis(a));
        const std::vector<double> noise =
            colored_noise(y.size(), stage.noise_rms, stage.noise_ar1, rng);
        for (std::size_t i = 0; i < y.size(); ++i) {
            y[i] += noise[i];
            if (stage.clip_level) {
                y[i] = std::clamp(y[i], -*stage.clip_level, *stage.clip_level);
            }
        }
        out[static_cast<int>(a)] = std::move(y);
    }
    return TriaxialSeries(input.meta(), input.t0(), std::move(out[0]), std::move(out[1]),
                          std::move(out[2]));
}

TriaxialSeries sensor_observe(const SensorModelSpec& spec,
                              const TriaxialSeries& true_signal, std::uint64_t seed) {
    spec.validate();
    const double src_rate = true_signal.rate_hz();
    if (spec.meta.rate_hz > src_rate) {
        throw Error(Errc::RateTooHigh, "sensor rate exceeds the source signal rate");
    }
    const double ratio = src_rate / spec.meta.rate_hz;
    const int factor = static_cast<int>(std::llround(ratio));
    if (std::abs(ratio - factor) > 1e-9) {
        throw Error(Errc::InvalidSpec, "sensor rate must divide the source rate");
    }

    std::vector<double> axes[3];
    for (Axis a : kAxes) {
        auto src = true_signal.axis(a);
        axes[static_cast<int>(a)].assign(src.begin(), src.end());
    }
    const double g[3] = {spec.gravity_vector.x, spec.gravity_vector.y,
                         spec.gravity_vector.z};
    for (int ai = 0; ai < 3; ++ai) {
        for (double& v : axes[ai]) v += g[ai];
    }

    // Internal bandwidth filter, when it is realizable at the source rate.
    // (A corner at or above the source Nyquist cannot shape anything the
    // discrete stand-in can represent.)
    if (spec.meta.bandwidth_hz && *spec.meta.bandwidth_hz < 0.95 * src_rate / 2.0) {
        DigitalFilter bw(
            {design_lowpass_section(*spec.meta.bandwidth_hz, 0.7071067811865476,
                                    src_rate)},
            src_rate);
        for (auto& ax : axes) ax = bw.apply(ax);
    }

    SensorMeta full_rate_meta = spec.meta;
    full_rate_meta.rate_hz = src_rate;
    TriaxialSeries staged(full_rate_meta, true_signal.t0(), std::move(axes[0]),
                          std::move(axes[1]), std::move(axes[2]));
    // MEMS front ends band-limit near the output rate, so the rate change
    // is modeled as anti-aliased decimation.
    TriaxialSeries sampled = decimate(staged, factor, /*antialias_on=*/true);

    Rng rng(derive_seed(seed, 0x73656e73ULL));  // "sens"
    const double clip = spec.meta.range_g * kGravity;
    std::vector<double> out[3];
    for (Axis a : kAxes) {
        auto src = sampled.axis(a);
        auto& dst = out[static_cast<int>(a)];
        dst.assign(src.begin(), src.end());
        for (double& v : dst) {
            if (spec.noise_rms > 0.0) v += spec.noise_rms * rng.normal();
            if (spec.quantization_step > 0.0) {
                v = spec.quantization_step * std::round(v / spec.quantization_step);
            }
            v = std::clamp(v, -clip, clip);
        }
    }
    return TriaxialSeries(spec.meta, true_signal.t0(), std::move(out[0]),
                          std::move(out[1]), std::move(out[2]));
}

ExperimentBundle make_experiment(const ExperimentConfig& config, std::uint64_t seed) {
    ExperimentBundle bundle;
    bundle.seed = seed;
    bundle.ground_truth = config.arm;

    ToolSignalSpec tool_spec = config.tool;
    tool_spec.seed = derive_seed(seed, 1);
    bundle.true_tool = gen_tool_signal(tool_spec);

    bundle.true_hand = propagate(config.arm.hand_from_tool, bundle.true_tool,
                                 derive_seed(seed, 2));
    bundle.true_forearm = propagate(config.arm.forearm_from_hand, bundle.true_hand,
                                    derive_seed(seed, 3));
    bundle.true_upperarm = propagate(config.arm.upperarm_from_forearm,
                                     bundle.true_forearm, derive_seed(seed, 4));

    auto relabel = [](TriaxialSeries s, const char* id, Location loc) {
        s.meta().sensor_id = id;
        s.meta().location = loc;
        return s;
    };
    bundle.true_tool = relabel(std::move(bundle.true_tool), "true-tool", Location::Tool);
    bundle.true_hand = relabel(std::move(bundle.true_hand), "true-hand", Location::HandRT);
    bundle.true_forearm =
        relabel(std::move(bundle.true_forearm), "true-forearm", Location::ForearmRT);
    bundle.true_upperarm =
        relabel(std::move(bundle.true_upperarm), "true-upperarm", Location::UpperArmRT);

    bundle.observed.reserve(config.sensors.size());
    for (std::size_t i = 0; i < config.sensors.size(); ++i) {
        const SensorModelSpec& sensor = config.sensors[i];
        const TriaxialSeries* source = nullptr;
        switch (sensor.meta.location) {
            case Location::Tool: source = &bundle.true_tool; break;
            case Location::HandRT:
            case Location::HandLT: source = &bundle.true_hand; break;
            case Location::ForearmRT:
            case Location::ForearmLT: source = &bundle.true_forearm; break;
            case Location::UpperArmRT:
            case Location::UpperArmLT:
            case Location::NearUpperArmRT: source = &bundle.true_upperarm; break;
        }
        bundle.observed.push_back(
            sensor_observe(sensor, *source, derive_seed(seed, 100 + i)));
    }
    return bundle;
}

ExperimentConfig default_experiment_config() {
    ExperimentConfig config;
    config.tool = ToolSignalSpec{};  // 1600 Hz ground truth, 60 s

    const double rate = config.tool.rate_hz;
    config.arm.hand_from_tool =
        make_attenuator_stage(120.0, 0.70, 0.95, rate, 0.4, 0.5);
    config.arm.forearm_from_hand =
        make_attenuator_stage(40.0, 0.70, 0.70, rate, 0.3, 0.5);
    config.arm.upperarm_from_forearm =
        make_attenuator_stage(25.0, 0.65, 0.50, rate, 0.25, 0.5);

    auto sensor = [](const char* id, Location loc, double rate_hz, double range_g,
                     std::optional<double> bw, double noise) {
        SensorModelSpec s;
        s.meta.sensor_id = id;
        s.meta.location = loc;
        s.meta.rate_hz = rate_hz;
        s.meta.range_g = range_g;
        s.meta.bandwidth_hz = bw;
        s.noise_rms = noise;
        s.quantization_step = 16.0 * kGravity / 32768.0;  // 16 g over int16
        return s;
    };

    config.sensors = {
        sensor("hwt906-tool", Location::Tool, 400.0, 16.0, std::nullopt, 0.05),
        sensor("num-hand-rt", Location::HandRT, 400.0, 200.0, std::nullopt, 0.05),
        sensor("num-hand-lt", Location::HandLT, 400.0, 200.0, std::nullopt, 0.05),
        sensor("num-forearm-rt", Location::ForearmRT, 400.0, 200.0, std::nullopt, 0.05),
        sensor("num-forearm-lt", Location::ForearmLT, 400.0, 200.0, std::nullopt, 0.05),
        sensor("num-upperarm-rt", Location::UpperArmRT, 400.0, 200.0, std::nullopt, 0.05),
        sensor("num-upperarm-lt", Location::UpperArmLT, 400.0, 200.0, std::nullopt, 0.05),
        sensor("wt9011-near-upperarm-rt", Location::NearUpperArmRT, 200.0, 16.0, 256.0,
               0.08),
    };
    return config;
}

}  // namespace havmon
