#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "havmon/errors.hpp"

namespace havmon {

// Polynomial in the shift operator: coeffs[k] multiplies q^-k. Denominator
// polynomials are monic (coeffs[0] fixed at 1); their free parameters start
// at coeffs[1].
struct Polynomial {
    std::vector<double> coeffs;
    bool monic = false;

    void validate() const;
    std::size_t order() const { return monic ? coeffs.size() - 1 : coeffs.size(); }

    std::complex<double> eval(std::complex<double> z_inv) const;

    // Roots of z^n + c1 z^(n-1) + ... + cn, i.e. the poles/zeros this
    // polynomial places when it sits in a transfer function.
    std::vector<std::complex<double>> roots() const;

    bool stable() const;  // all roots strictly inside the unit circle

    // Reflects roots on/outside the unit circle to 1/conj(r). Changes the
    // magnitude response by a constant factor only.
    Polynomial stabilized() const;

    static Polynomial monic_identity(std::size_t order_n);
};

// y(t) = B(q)/A(q) u(t - delay) + C(q)/D(q) e(t). The letters follow the
// source convention: B/A is the system path, C/D the noise path.
struct BoxJenkinsModel {
    Polynomial b;  // system numerator, nb coefficients at powers 0..nb-1
    Polynomial a;  // system denominator, monic, order na
    Polynomial c;  // noise numerator, monic, order nc
    Polynomial d;  // noise denominator, monic, order nd
    std::size_t input_delay = 1;
    double rate_hz = 0.0;

    void validate() const;
};

struct FitOrders {
    std::size_t nb = 1;
    std::size_t na = 1;
    std::size_t nc = 1;
    std::size_t nd = 1;
};

struct FitOptions {
    std::size_t max_iterations = 200;
    double rel_tolerance = 1e-9;  // stop when the relative cost decrease falls below
};

struct FitReport {
    double nrmse_fit_percent = 0.0;     // prediction fit, 100 = perfect
    double rmse_simulated = 0.0;
    double rmse_predicted = 0.0;
    double rms_discrepancy_percent = 0.0;  // |RMS(pred) - RMS(meas)| / RMS(meas) * 100
    FitOrders orders;
    std::size_t iterations = 0;
    bool converged = false;
};

struct PredictionTrace {
    std::vector<double> y_measured;
    std::vector<double> y_simulated;
    std::vector<double> y_predicted;
    std::vector<double> residuals;  // measured - predicted
};

// Noise-free response of the system path: y_sim(t) = B/A u(t - delay),
// zero initial conditions.
std::vector<double> simulate(const BoxJenkinsModel& model, std::span<const double> u);

// One-step-ahead predictor using both paths:
//   y_hat(t|t-1) = H^-1 G u(t - delay) + (1 - H^-1) y(t),  G = B/A, H = C/D.
PredictionTrace predict_one_step(const BoxJenkinsModel& model, std::span<const double> u,
                                 std::span<const double> y);

// Prediction-error fit by damped Gauss-Newton, initialized from linear
// least-squares pre-fits. Denominators are projected to stability by root
// reflection after every step.
std::pair<BoxJenkinsModel, FitReport> fit_bj(std::span<const double> u,
                                             std::span<const double> y,
                                             const FitOrders& orders,
                                             const FitOptions& options = {},
                                             double rate_hz = 1.0,
                                             std::size_t input_delay = 1);

struct FrequencyResponse {
    std::vector<double> freqs_hz;
    std::vector<double> gain_system;  // |G|
    std::vector<double> gain_noise;   // |H|
};

FrequencyResponse frequency_response(const BoxJenkinsModel& model,
                                     std::span<const double> freqs_hz);

// 100 * (1 - ||y - y_hat|| / ||y - mean(y)||).
double nrmse_fit(std::span<const double> y, std::span<const double> y_hat);

double rmse(std::span<const double> y, std::span<const double> y_hat);

struct OrderSweepEntry {
    std::size_t order = 0;
    std::optional<FitReport> report;  // empty when the fit failed
    std::string error;
    bool recommended = false;
};

// Runs fit_bj with nb = na = nc = nd = order for each order in the range.
// The smallest order within 1% of the best rmse_predicted is flagged
// recommended. Per-entry failures are recorded, not fatal.
std::vector<OrderSweepEntry> order_sweep(std::span<const double> u,
                                         std::span<const double> y,
                                         std::span<const std::size_t> orders,
                                         const FitOptions& options = {},
                                         double rate_hz = 1.0,
                                         std::size_t input_delay = 1);

// Structured-text model document: orders, coefficients at full precision,
// delay, rate, fit metrics. parse_model(serialize_model(m, r)) is lossless.
std::string serialize_model(const BoxJenkinsModel& model, const FitReport& report);
std::pair<BoxJenkinsModel, FitReport> parse_model(const std::string& text);

}  // namespace havmon
