#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "havmon/synth.hpp"
#include "havmon/weighting.hpp"
#include "test_util.hpp"

using namespace havmon;
using havtest::error_code_of;
using havtest::rel_err;

namespace {

double dyn_rms(const TriaxialSeries& s, Axis ax) {
    const auto v = s.axis(ax);
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= double(v.size());
    double acc = 0.0;
    for (double x : v) acc += (x - mean) * (x - mean);
    return std::sqrt(acc / double(v.size()));
}

}  // namespace

TEST_SUITE("synth") {

TEST_CASE("rng draws are deterministic and well ranged") {
    Rng a(42), b(42), c(43);
    bool all_equal = true;
    bool any_differ = false;
    for (int i = 0; i < 1000; ++i) {
        const double ua = a.uniform();
        const double ub = b.uniform();
        if (ua != ub) all_equal = false;
        if (ua != c.uniform()) any_differ = true;
        CHECK(ua >= 0.0);
        CHECK(ua < 1.0);
    }
    CHECK(all_equal);
    CHECK(any_differ);

    // normal draws: mean ~ 0, var ~ 1 over a large sample
    Rng g(7);
    double sum = 0.0, sq = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double v = g.normal();
        sum += v;
        sq += v * v;
    }
    CHECK(std::abs(sum / n) < 0.02);
    CHECK(std::abs(sq / n - 1.0) < 0.02);
}

TEST_CASE("derived seeds separate streams") {
    const std::uint64_t base = 1234567;
    CHECK(derive_seed(base, 1) != derive_seed(base, 2));
    CHECK(derive_seed(base, 1) != derive_seed(base + 1, 1));
    CHECK(derive_seed(base, 1) == derive_seed(base, 1));
}

TEST_CASE("tool signal shape and determinism") {
    ToolSignalSpec spec;
    spec.duration_s = 2.0;
    spec.rate_hz = 1600.0;
    spec.seed = 99;
    const TriaxialSeries s1 = gen_tool_signal(spec);
    const TriaxialSeries s2 = gen_tool_signal(spec);
    CHECK(s1 == s2);
    CHECK(s1.size() == 3200);
    CHECK(s1.rate_hz() == 1600.0);
    CHECK(s1.meta().location == Location::Tool);

    spec.seed = 100;
    CHECK_FALSE(gen_tool_signal(spec) == s1);
}

TEST_CASE("a lone harmonic carries its textbook rms") {
    ToolSignalSpec spec;
    spec.impact_amplitude = 0.0;
    spec.broadband_noise_rms = 0.0;
    spec.harmonic_amplitudes = {6.0};
    spec.rotation_hz = 20.0;
    spec.duration_s = 5.0;
    spec.rate_hz = 1600.0;
    spec.seed = 1;
    const TriaxialSeries s = gen_tool_signal(spec);
    for (Axis ax : kAxes) {
        const double r = axis_rms(s.axis(ax));
        CHECK(rel_err(r, 6.0 / std::sqrt(2.0)) < 0.01);
    }
}

TEST_CASE("attenuator stage meets its dc gain") {
    const ArmStage stage = make_attenuator_stage(120.0, 0.7, 0.95, 1600.0);
    CHECK(rel_err(stage.dc_gain(), 0.95) < 1e-12);
    CHECK(error_code_of([&] { make_attenuator_stage(120.0, 0.7, 1.5, 1600.0); }) ==
          Errc::InvalidSpec);
    CHECK(error_code_of([&] { make_attenuator_stage(120.0, 0.7, 0.0, 1600.0); }) ==
          Errc::InvalidSpec);
}

TEST_CASE("propagation through a wide-open quiet stage is near identity") {
    ToolSignalSpec tspec;
    tspec.duration_s = 2.0;
    tspec.seed = 5;
    const TriaxialSeries tool = gen_tool_signal(tspec);

    // corner far above the signal band, no noise
    const ArmStage stage = make_attenuator_stage(700.0, 1.0 / std::sqrt(2.0), 1.0, 1600.0);
    const TriaxialSeries out = propagate(stage, tool, 77);
    CHECK(out.size() == tool.size());
    for (Axis ax : kAxes) {
        const double in_rms = dyn_rms(tool, ax);
        const double out_rms = dyn_rms(out, ax);
        CHECK(rel_err(out_rms, in_rms) < 0.05);
    }

    ToolSignalSpec wrong = tspec;
    wrong.rate_hz = 800.0;
    const TriaxialSeries slow = gen_tool_signal(wrong);
    CHECK(error_code_of([&] { propagate(stage, slow, 77); }) == Errc::RateMismatch);
}

TEST_CASE("energy decays down the arm chain") {
    ExperimentConfig config = default_experiment_config();
    config.tool.duration_s = 4.0;
    const ExperimentBundle bundle = make_experiment(config, 11);

    double prev = 1e300;
    for (const TriaxialSeries* s : {&bundle.true_tool, &bundle.true_hand,
                                    &bundle.true_forearm, &bundle.true_upperarm}) {
        double total = 0.0;
        for (Axis ax : kAxes) {
            const double r = dyn_rms(*s, ax);
            total += r * r;
        }
        const double level = std::sqrt(total);
        CHECK(level < prev * 1.02);  // small headroom for link noise
        CHECK(level > 0.0);
        prev = level;
    }
}

TEST_CASE("sensor observation reduces to identity when every defect is off") {
    ToolSignalSpec tspec;
    tspec.duration_s = 1.0;
    tspec.seed = 8;
    const TriaxialSeries truth = gen_tool_signal(tspec);

    SensorModelSpec spec;
    spec.meta = truth.meta();
    spec.meta.sensor_id = "ideal";
    spec.noise_rms = 0.0;
    spec.quantization_step = 0.0;
    spec.gravity_vector = {0.0, 0.0, 0.0};
    const TriaxialSeries seen = sensor_observe(spec, truth, 3);
    REQUIRE(seen.size() == truth.size());
    for (Axis ax : kAxes) {
        const auto a = truth.axis(ax);
        const auto b = seen.axis(ax);
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
    }
}

TEST_CASE("gravity offsets the observed mean") {
    ToolSignalSpec tspec;
    tspec.duration_s = 2.0;
    tspec.seed = 8;
    const TriaxialSeries truth = gen_tool_signal(tspec);

    SensorModelSpec spec;
    spec.meta = truth.meta();
    spec.meta.sensor_id = "grav";
    const TriaxialSeries seen = sensor_observe(spec, truth, 3);

    const auto z = seen.axis(Axis::Z);
    const auto z0 = truth.axis(Axis::Z);
    double mz = 0.0, mz0 = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) { mz += z[i]; mz0 += z0[i]; }
    mz /= double(z.size());
    mz0 /= double(z0.size());
    CHECK(rel_err(mz - mz0, kGravity) < 1e-9);
}

TEST_CASE("quantization confines samples to the grid") {
    ToolSignalSpec tspec;
    tspec.duration_s = 1.0;
    tspec.seed = 9;
    const TriaxialSeries truth = gen_tool_signal(tspec);

    SensorModelSpec spec;
    spec.meta = truth.meta();
    spec.meta.sensor_id = "quantized";
    spec.gravity_vector = {0.0, 0.0, 0.0};
    spec.quantization_step = 0.25;
    const TriaxialSeries seen = sensor_observe(spec, truth, 3);
    for (Axis ax : kAxes)
        for (double v : seen.axis(ax)) {
            const double cells = v / 0.25;
            CHECK(std::abs(cells - std::round(cells)) < 1e-9);
        }
}

TEST_CASE("range clipping caps the observed magnitude") {
    ToolSignalSpec tspec;
    tspec.duration_s = 1.0;
    tspec.impact_amplitude = 400.0;  // far beyond a 2 g sensor
    tspec.seed = 10;
    const TriaxialSeries truth = gen_tool_signal(tspec);

    SensorModelSpec spec;
    spec.meta = truth.meta();
    spec.meta.sensor_id = "clipped";
    spec.meta.range_g = 2.0;
    spec.gravity_vector = {0.0, 0.0, 0.0};
    const TriaxialSeries seen = sensor_observe(spec, truth, 3);
    const double cap = 2.0 * kGravity;
    bool touched = false;
    for (Axis ax : kAxes)
        for (double v : seen.axis(ax)) {
            CHECK(std::abs(v) <= cap + 1e-12);
            if (std::abs(v) == cap) touched = true;
        }
    CHECK(touched);
}

TEST_CASE("observation rate constraints") {
    ToolSignalSpec tspec;
    tspec.duration_s = 1.0;
    tspec.seed = 12;
    const TriaxialSeries truth = gen_tool_signal(tspec);  // 1600 Hz

    SensorModelSpec fast;
    fast.meta = truth.meta();
    fast.meta.sensor_id = "fast";
    fast.meta.rate_hz = 3200.0;
    CHECK(error_code_of([&] { sensor_observe(fast, truth, 1); }) == Errc::RateTooHigh);

    SensorModelSpec odd;
    odd.meta = truth.meta();
    odd.meta.sensor_id = "odd";
    odd.meta.rate_hz = 600.0;  // 1600/600 is not an integer
    CHECK(error_code_of([&] { sensor_observe(odd, truth, 1); }) == Errc::InvalidSpec);

    SensorModelSpec down;
    down.meta = truth.meta();
    down.meta.sensor_id = "down";
    down.meta.rate_hz = 400.0;
    down.gravity_vector = {0.0, 0.0, 0.0};
    const TriaxialSeries seen = sensor_observe(down, truth, 1);
    CHECK(seen.rate_hz() == 400.0);
    CHECK(seen.size() == truth.size() / 4);
}

TEST_CASE("the default experiment is fully wired") {
    ExperimentConfig config = default_experiment_config();
    config.tool.duration_s = 2.0;
    const ExperimentBundle b1 = make_experiment(config, 101);
    const ExperimentBundle b2 = make_experiment(config, 101);

    REQUIRE(b1.observed.size() == config.sensors.size());
    CHECK(b1.true_tool == b2.true_tool);
    CHECK(b1.true_upperarm == b2.true_upperarm);
    for (std::size_t i = 0; i < b1.observed.size(); ++i)
        CHECK(b1.observed[i] == b2.observed[i]);

    const ExperimentBundle b3 = make_experiment(config, 102);
    CHECK_FALSE(b3.true_tool == b1.true_tool);

    // truth series carry their chain position
    CHECK(b1.true_hand.meta().location == Location::HandRT);
    CHECK(b1.true_forearm.meta().location == Location::ForearmRT);
    CHECK(b1.true_upperarm.meta().location == Location::UpperArmRT);

    // 400 Hz body sensors hold rate * duration samples; the 200 Hz unit half that
    for (const auto& obs : b1.observed) {
        const std::size_t expect =
            std::size_t(obs.meta().rate_hz * config.tool.duration_s + 0.5);
        CHECK(obs.size() == expect);
    }
}

TEST_CASE("spec validation rejects nonsense") {
    ToolSignalSpec bad;
    bad.rate_hz = -1.0;
    CHECK(error_code_of([&] { bad.validate(); }) == Errc::InvalidSpec);

    ToolSignalSpec bad2;
    bad2.duration_s = 0.0;
    CHECK(error_code_of([&] { bad2.validate(); }) == Errc::InvalidSpec);

    SensorModelSpec tilt;
    tilt.meta = havtest::make_meta(400.0);
    tilt.gravity_vector = {1.0, 1.0, 1.0};  // wrong magnitude, not zero
    CHECK(error_code_of([&] { tilt.validate(); }) == Errc::InvalidSpec);
}

}  // TEST_SUITE
