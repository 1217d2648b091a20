#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "havmon/filter.hpp"
#include "test_util.hpp"

using namespace havmon;
using havtest::error_code_of;

namespace {

// Analog second-order magnitude, the reference the bilinear design chases.
double analog_mag(double B2, double B1, double B0, double A2, double A1, double A0,
                  double f_hz) {
    const std::complex<double> s{0.0, 2.0 * std::numbers::pi * f_hz};
    return std::abs((B2 * s * s + B1 * s + B0) / (A2 * s * s + A1 * s + A0));
}

constexpr double kQ = 0.7071067811865476;

}  // namespace

TEST_SUITE("filter") {

TEST_CASE("stability triangle") {
    CHECK(Biquad{1, 0, 0, -1.9, 0.95}.stable());
    CHECK_FALSE(Biquad{1, 0, 0, -1.9, 1.0}.stable());   // pole on the circle
    CHECK_FALSE(Biquad{1, 0, 0, 2.1, 0.9}.stable());    // outside the triangle
    CHECK_FALSE(Biquad{1, 0, 0, 0.0, -1.0}.stable());
}

TEST_CASE("prewarping pins the response at the corner") {
    constexpr double f0 = 100.0;
    constexpr double rate = 10000.0;
    const DigitalFilter lp({design_lowpass_section(f0, kQ, rate)}, rate);
    // Butterworth magnitude at its own corner is exactly q.
    CHECK(lp.magnitude(f0) == doctest::Approx(kQ).epsilon(1e-12));

    const DigitalFilter hp({design_highpass_section(f0, kQ, rate)}, rate);
    CHECK(hp.magnitude(f0) == doctest::Approx(kQ).epsilon(1e-12));
}

TEST_CASE("digital lowpass tracks the analog prototype away from Nyquist") {
    constexpr double f0 = 100.0;
    constexpr double rate = 10000.0;
    const double w = 2.0 * std::numbers::pi * f0;
    const DigitalFilter lp({design_lowpass_section(f0, kQ, rate)}, rate);
    for (double f : {5.0, 20.0, 50.0, 100.0, 200.0, 500.0, 1000.0}) {
        const double ref = analog_mag(0, 0, w * w, 1, w / kQ, w * w, f);
        CHECK(lp.magnitude(f) == doctest::Approx(ref).epsilon(0.02));
    }
}

TEST_CASE("highpass rejects DC completely") {
    const DigitalFilter hp({design_highpass_section(6.31, kQ, 1000.0)}, 1000.0);
    CHECK(hp.magnitude(0.0) < 1e-12);
    CHECK(hp.magnitude(63.1) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("apply matches a direct-form difference equation") {
    // The cascade runs direct form II transposed; the oracle below is the
    // textbook direct form I recursion.
    const std::vector<Biquad> sections = {
        design_lowpass_section(40.0, 1.2, 500.0),
        design_highpass_section(5.0, kQ, 500.0),
    };
    std::mt19937 gen(42);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> x(64);
    for (double& v : x) v = dist(gen);

    std::vector<double> want = x;
    for (const Biquad& s : sections) {
        std::vector<double> y(want.size(), 0.0);
        for (std::size_t n = 0; n < want.size(); ++n) {
            double acc = s.b0 * want[n];
            if (n >= 1) acc += s.b1 * want[n - 1] - s.a1 * y[n - 1];
            if (n >= 2) acc += s.b2 * want[n - 2] - s.a2 * y[n - 2];
            y[n] = acc;
        }
        want = std::move(y);
    }

    const DigitalFilter filt(sections, 500.0);
    const std::vector<double> got = filt.apply(x);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
    }
}

TEST_CASE("sine gain through apply equals the magnitude response") {
    constexpr double rate = 2000.0;
    constexpr double f = 150.0;
    const DigitalFilter lp({design_lowpass_section(100.0, kQ, rate)}, rate);

    std::vector<double> x(8000);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = std::sin(2.0 * std::numbers::pi * f * static_cast<double>(i) / rate);
    }
    const auto y = lp.apply(x);
    // Skip the transient, compare steady-state RMS ratio to |H(f)|.
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 2000; i < x.size(); ++i) {
        sx += x[i] * x[i];
        sy += y[i] * y[i];
    }
    CHECK(std::sqrt(sy / sx) == doctest::Approx(lp.magnitude(f)).epsilon(0.01));
}

TEST_CASE("constructor validates rate and stability") {
    CHECK(error_code_of([] { DigitalFilter({Biquad{}}, 0.0); }) == Errc::InvalidSpec);
    CHECK(error_code_of([] {
              DigitalFilter({Biquad{1, 0, 0, 0.0, 1.5}}, 100.0);
          }) == Errc::UnstableModel);
}

}  // TEST_SUITE
