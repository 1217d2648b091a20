#include <doctest.h>

#include <cmath>
#include <numbers>

#include "havmon/gravity.hpp"
#include "test_util.hpp"

using namespace havmon;
using havtest::error_code_of;
using havtest::rel_err;
using havtest::series_of;

TEST_SUITE("gravity") {

TEST_CASE("one estimator step is a convex blend") {
    GravityEstimatorState s{{0.0, 0.0, 10.0}};
    s = estimate_gravity_step(s, {1.0, 0.0, 8.0}, 0.05);
    CHECK(s.g_est.x == doctest::Approx(0.05));
    CHECK(s.g_est.y == doctest::Approx(0.0));
    CHECK(s.g_est.z == doctest::Approx(0.05 * 8.0 + 0.95 * 10.0));
}

TEST_CASE("constant input with first-sample init vanishes identically") {
    const auto series =
        series_of(100.0, 1000, [](double) { return 3.7; }, [](double) { return -1.2; },
                  [](double) { return kGravity; });
    const auto dyn = remove_gravity(series);  // FirstSample is the default
    for (Axis a : kAxes) {
        for (double v : dyn.axis(a)) CHECK(v == 0.0);
    }
}

TEST_CASE("constant input with zero init decays geometrically") {
    // g(i) = c (1 - 0.95^(i+1)) so the residual is exactly c * 0.95^(i+1).
    constexpr double c = 9.81;
    const auto series = series_of(100.0, 200, [](double) { return c; });
    GravityEstimatorConfig cfg;
    cfg.init_policy = GravityInit::Zero;
    const auto dyn = remove_gravity(series, cfg);
    const auto x = dyn.axis(Axis::X);
    for (std::size_t i = 0; i < 60; ++i) {
        const double want = c * std::pow(0.95, static_cast<double>(i + 1));
        CHECK(rel_err(x[i], want) < 1e-12);
    }
}

TEST_CASE("given init equal to the constant input also vanishes") {
    GravityEstimatorConfig cfg;
    cfg.init_policy = GravityInit::Given;
    cfg.initial = {0.5, -2.0, 9.8};
    const auto series =
        series_of(50.0, 100, [](double) { return 0.5; }, [](double) { return -2.0; },
                  [](double) { return 9.8; });
    const auto dyn = remove_gravity(series, cfg);
    for (Axis a : kAxes) {
        for (double v : dyn.axis(a)) CHECK(std::abs(v) < 1e-15);
    }
}

TEST_CASE("the estimator is linear when the init does not depend on the data") {
    GravityEstimatorConfig cfg;
    cfg.init_policy = GravityInit::Zero;
    const auto f = series_of(100.0, 64, [](double t) { return std::sin(5.0 * t); });
    const auto g = series_of(100.0, 64, [](double t) { return t * t; });
    const auto sum = series_of(100.0, 64,
                               [](double t) { return std::sin(5.0 * t) + t * t; });

    const auto df = remove_gravity(f, cfg);
    const auto dg = remove_gravity(g, cfg);
    const auto ds = remove_gravity(sum, cfg);
    for (std::size_t i = 0; i < 64; ++i) {
        CHECK(ds.axis(Axis::X)[i] ==
              doctest::Approx(df.axis(Axis::X)[i] + dg.axis(Axis::X)[i]).epsilon(1e-12));
    }
}

TEST_CASE("slow drift is tracked, fast vibration passes through") {
    // A 40 Hz tone rides on a constant offset; after the estimator settles
    // the offset is gone while the tone keeps nearly all its amplitude.
    const auto series = series_of(400.0, 4000, [](double t) {
        return 9.8 + 2.0 * std::sin(2.0 * std::numbers::pi * 40.0 * t);
    });
    const auto dyn = remove_gravity(series);
    const auto x = dyn.axis(Axis::X);
    double mean = 0.0, power = 0.0;
    for (std::size_t i = 2000; i < x.size(); ++i) mean += x[i];
    mean /= 2000.0;
    for (std::size_t i = 2000; i < x.size(); ++i) power += (x[i] - mean) * (x[i] - mean);
    const double rms = std::sqrt(power / 2000.0);
    CHECK(std::abs(mean) < 0.02);
    CHECK(rms == doctest::Approx(2.0 / std::sqrt(2.0)).epsilon(0.05));
}

TEST_CASE("config validation") {
    GravityEstimatorConfig cfg;
    cfg.beta = 0.0;
    CHECK(error_code_of([&] { cfg.validate(); }) == Errc::InvalidSpec);
    cfg.beta = 1.0;
    CHECK(error_code_of([&] { cfg.validate(); }) == Errc::InvalidSpec);
    const auto series = series_of(10.0, 5, [](double) { return 1.0; });
    cfg.beta = 0.05;
    CHECK(remove_gravity(series, cfg).size() == 5);
}

}  // TEST_SUITE
