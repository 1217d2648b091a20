#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "havmon/sysid.hpp"
#include "test_util.hpp"

using namespace havmon;
using havtest::error_code_of;
using havtest::rel_err;

namespace {

std::vector<double> white(std::size_t n, unsigned seed, double sd = 1.0) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> nd(0.0, sd);
    std::vector<double> out(n);
    for (auto& v : out) v = nd(gen);
    return out;
}

double rms_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s / double(v.size()));
}

BoxJenkinsModel reference_model(double rate = 1.0) {
    BoxJenkinsModel m;
    m.b = {{0.4, 0.2}, false};
    m.a = {{1.0, -1.2, 0.52}, true};   // poles 0.6 +- 0.4i
    m.c = {{1.0, 0.3}, true};
    m.d = {{1.0, -0.5}, true};
    m.input_delay = 1;
    m.rate_hz = rate;
    return m;
}

}  // namespace

TEST_SUITE("sysid") {

TEST_CASE("polynomial roots of a factored quadratic") {
    // (z - 0.5)(z + 0.25) = z^2 - 0.25 z - 0.125
    Polynomial p{{1.0, -0.25, -0.125}, true};
    auto roots = p.roots();
    REQUIRE(roots.size() == 2);
    std::sort(roots.begin(), roots.end(),
              [](auto l, auto r) { return l.real() < r.real(); });
    CHECK(std::abs(roots[0] - std::complex<double>(-0.25, 0.0)) < 1e-12);
    CHECK(std::abs(roots[1] - std::complex<double>(0.5, 0.0)) < 1e-12);
    CHECK(p.stable());
}

TEST_CASE("trailing zero coefficients do not invent roots at zero") {
    Polynomial p{{1.0, -0.5, 0.0, 0.0}, true};
    auto roots = p.roots();
    REQUIRE(roots.size() == 1);
    CHECK(std::abs(roots[0] - std::complex<double>(0.5, 0.0)) < 1e-12);
}

TEST_CASE("stabilization reflects roots and keeps the magnitude shape") {
    Polynomial p{{1.0, -2.5, 1.0}, true};  // roots 2 and 0.5
    CHECK_FALSE(p.stable());
    const Polynomial q = p.stabilized();
    CHECK(q.stable());
    for (auto r : q.roots()) CHECK(std::abs(r) < 1.0);

    // reflection changes |P(e^{jw})| by a constant factor across frequency
    double ratio0 = 0.0;
    for (int k = 0; k < 8; ++k) {
        const double w = 0.1 + 0.35 * k;
        const std::complex<double> z_inv = std::polar(1.0, -w);
        const double ratio = std::abs(p.eval(z_inv)) / std::abs(q.eval(z_inv));
        if (k == 0) ratio0 = ratio;
        CHECK(rel_err(ratio, ratio0) < 1e-10);
    }

    // a stable polynomial passes through unchanged
    Polynomial s{{1.0, -0.9}, true};
    const Polynomial s2 = s.stabilized();
    CHECK(rel_err(s2.coeffs[1], -0.9) < 1e-9);
}

TEST_CASE("simulate matches the scalar closed form") {
    // y(t) = 0.5 u(t-1) + 0.9 y(t-1); unit step input gives 5(1 - 0.9^t)
    BoxJenkinsModel m;
    m.b = {{0.5}, false};
    m.a = {{1.0, -0.9}, true};
    m.c = Polynomial::monic_identity(0);
    m.d = Polynomial::monic_identity(0);
    m.input_delay = 1;
    m.rate_hz = 1.0;

    std::vector<double> u(40, 1.0);
    const auto y = simulate(m, u);
    REQUIRE(y.size() == u.size());
    CHECK(y[0] == 0.0);  // delay eats the first sample
    CHECK(rel_err(y[1], 0.5) < 1e-13);
    for (std::size_t t = 1; t < y.size(); ++t) {
        const double expect = 5.0 * (1.0 - std::pow(0.9, double(t)));
        CHECK(rel_err(y[t], expect) < 1e-11);
    }
}

TEST_CASE("simulate is linear in the input") {
    const auto m = reference_model();
    const auto u1 = white(256, 11);
    const auto u2 = white(256, 12);
    std::vector<double> mix(256);
    for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = 2.0 * u1[i] - 3.0 * u2[i];

    const auto y1 = simulate(m, u1);
    const auto y2 = simulate(m, u2);
    const auto ym = simulate(m, mix);
    for (std::size_t i = 0; i < mix.size(); ++i)
        CHECK(std::abs(ym[i] - (2.0 * y1[i] - 3.0 * y2[i])) < 1e-10);
}

TEST_CASE("model validation rejects unusable configurations") {
    auto m = reference_model();
    m.a = {{1.0, -2.0}, true};  // pole at 2
    CHECK(error_code_of([&] { simulate(m, std::vector<double>(8, 0.0)); }) ==
          Errc::UnstableModel);

    auto m2 = reference_model();
    m2.c = {{1.0, -1.5}, true};  // predictor would be unstable
    const std::vector<double> z(32, 0.0);
    CHECK(error_code_of([&] { predict_one_step(m2, z, z); }) ==
          Errc::NonInvertibleNoiseModel);
}

TEST_CASE("identity noise model makes prediction equal simulation") {
    auto m = reference_model();
    m.c = Polynomial::monic_identity(0);
    m.d = Polynomial::monic_identity(0);
    const auto u = white(300, 21);
    const auto y_meas = simulate(m, u);
    const auto trace = predict_one_step(m, u, y_meas);
    const auto y_sim = simulate(m, u);
    for (std::size_t i = 0; i < u.size(); ++i) {
        CHECK(std::abs(trace.y_predicted[i] - y_sim[i]) < 1e-10);
        CHECK(std::abs(trace.residuals[i] - (y_meas[i] - trace.y_predicted[i])) < 1e-12);
    }
}

TEST_CASE("noise-free second order system is recovered almost exactly") {
    const auto truth = reference_model();
    const auto u = white(2000, 5);
    const auto y = simulate(truth, u);

    const auto [model, report] = fit_bj(u, y, {2, 2, 1, 1}, {}, 1.0, 1);
    CHECK(report.converged);
    const auto trace = predict_one_step(model, u, y);
    CHECK(rms_of(trace.residuals) < 1e-6 * rms_of(y));
    CHECK(report.nrmse_fit_percent > 99.99);

    // recovered system path matches the truth in gain across the band
    std::vector<double> freqs;
    for (int k = 1; k <= 9; ++k) freqs.push_back(0.05 * k);
    const auto fr_fit = frequency_response(model, freqs);
    const auto fr_true = frequency_response(truth, freqs);
    for (std::size_t i = 0; i < freqs.size(); ++i)
        CHECK(rel_err(fr_fit.gain_system[i], fr_true.gain_system[i]) < 1e-4);
}

TEST_CASE("noisy data still yields a usable fit") {
    const auto truth = reference_model();
    const auto u = white(3000, 31);
    auto y = simulate(truth, u);
    const double noise_sd = rms_of(y) * 0.1;  // 20 dB SNR
    const auto e = white(y.size(), 32, noise_sd);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += e[i];

    const auto [model, report] = fit_bj(u, y, {2, 2, 1, 1}, {}, 1.0, 1);
    CHECK(report.nrmse_fit_percent > 80.0);
    CHECK(report.rmse_predicted <= report.rmse_simulated);
}

TEST_CASE("fit input guards") {
    const std::vector<double> small(20, 1.0);
    CHECK(error_code_of([&] { fit_bj(small, small, {2, 2, 2, 2}); }) ==
          Errc::InsufficientData);

    const std::vector<double> flat(400, 3.0);
    auto yv = white(400, 9);
    CHECK(error_code_of([&] { fit_bj(flat, yv, {1, 1, 1, 1}); }) ==
          Errc::DegenerateInput);

    const auto u = white(400, 10);
    std::vector<double> yshort(399, 0.0);
    CHECK(error_code_of([&] { fit_bj(u, yshort, {1, 1, 1, 1}); }) ==
          Errc::LengthMismatch);
}

TEST_CASE("frequency response endpoints and range checks") {
    const auto m = reference_model(100.0);
    std::vector<double> freqs = {0.0, 10.0, 50.0};
    const auto fr = frequency_response(m, freqs);
    REQUIRE(fr.freqs_hz.size() == 3);

    // at DC, |G| = B(1)/A(1)
    const double g0 = std::abs(m.b.eval({1.0, 0.0})) / std::abs(m.a.eval({1.0, 0.0}));
    CHECK(rel_err(fr.gain_system[0], g0) < 1e-12);
    // at Nyquist, z^-1 = -1
    const double gn = std::abs(m.b.eval({-1.0, 0.0})) / std::abs(m.a.eval({-1.0, 0.0}));
    CHECK(rel_err(fr.gain_system[2], gn) < 1e-12);
    CHECK(fr.gain_noise[0] == doctest::Approx(std::abs(m.c.eval({1.0, 0.0})) /
                                              std::abs(m.d.eval({1.0, 0.0}))).epsilon(1e-12));

    std::vector<double> bad = {51.0};
    CHECK(error_code_of([&] { frequency_response(m, bad); }) == Errc::FrequencyOutOfRange);
    std::vector<double> neg = {-1.0};
    CHECK(error_code_of([&] { frequency_response(m, neg); }) == Errc::FrequencyOutOfRange);
}

TEST_CASE("fit quality metrics") {
    const std::vector<double> y = {0.0, 2.0};
    const std::vector<double> zero = {0.0, 0.0};
    // ||y - 0|| / ||y - 1|| = 2/sqrt(2): nrmse = 100(1 - sqrt(2)) = -41.42...
    CHECK(rel_err(nrmse_fit(y, zero), 100.0 * (1.0 - std::sqrt(2.0))) < 1e-12);

    const std::vector<double> perfect = {0.0, 2.0};
    CHECK(nrmse_fit(y, perfect) == doctest::Approx(100.0).epsilon(1e-13));

    const std::vector<double> constant = {3.0, 3.0};
    CHECK(error_code_of([&] { nrmse_fit(constant, zero); }) == Errc::ConstantReference);

    CHECK(rel_err(rmse(y, zero), std::sqrt(2.0)) < 1e-13);
    CHECK(error_code_of([&] { rmse(y, std::vector<double>(3, 0.0)); }) ==
          Errc::LengthMismatch);
}

TEST_CASE("order sweep flags a parsimonious recommendation") {
    const auto truth = reference_model();
    const auto u = white(1500, 41);
    const auto y = simulate(truth, u);

    const std::vector<std::size_t> orders = {1, 2, 3, 4};
    const auto sweep = order_sweep(u, y, orders);
    REQUIRE(sweep.size() == 4);
    std::size_t recommended = 0;
    for (const auto& entry : sweep) {
        CHECK(entry.report.has_value());
        if (entry.recommended) ++recommended;
    }
    CHECK(recommended == 1);
    // the truth is order 2, so order >= 2 is near-perfect and 2 wins on parsimony
    const auto it = std::find_if(sweep.begin(), sweep.end(),
                                 [](const auto& e) { return e.recommended; });
    CHECK(it->order == 2);
}

TEST_CASE("order sweep records failures without aborting") {
    const auto u = white(60, 51);
    const auto y = white(60, 52);
    const std::vector<std::size_t> orders = {1, 20};  // 20 needs 800 samples
    const auto sweep = order_sweep(u, y, orders);
    REQUIRE(sweep.size() == 2);
    CHECK(sweep[0].report.has_value());
    CHECK_FALSE(sweep[1].report.has_value());
    CHECK_FALSE(sweep[1].error.empty());
}

TEST_CASE("model documents round-trip losslessly") {
    const auto truth = reference_model(400.0);
    const auto u = white(1200, 61);
    const auto y = simulate(truth, u);
    const auto [model, report] = fit_bj(u, y, {2, 2, 1, 1}, {}, 400.0, 1);

    const std::string text = serialize_model(model, report);
    const auto [back, rep2] = parse_model(text);

    CHECK(back.b.coeffs == model.b.coeffs);
    CHECK(back.a.coeffs == model.a.coeffs);
    CHECK(back.c.coeffs == model.c.coeffs);
    CHECK(back.d.coeffs == model.d.coeffs);
    CHECK(back.input_delay == model.input_delay);
    CHECK(back.rate_hz == model.rate_hz);
    CHECK(rep2.nrmse_fit_percent == report.nrmse_fit_percent);
    CHECK(rep2.converged == report.converged);
    CHECK(serialize_model(back, rep2) == text);

    CHECK(error_code_of([&] { parse_model("not a model\n"); }) == Errc::UnknownFormat);
}

}  // TEST_SUITE
