#include "havmon/sysid.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

namespace havmon {

namespace {

constexpr double kStabilityMargin = 1.0 - 1e-9;

// y(t) = sum_k num[k] x(t-k) - sum_{k>=1} den[k] y(t-k), zero initial state.
std::vector<double> filter_ratio(std::span<const double> num,
                                 std::span<const double> den,
                                 std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<double> y(n, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
        double acc = 0.0;
        for (std::size_t k = 0; k < num.size() && k <= t; ++k) acc += num[k] * x[t - k];
        for (std::size_t k = 1; k < den.size() && k <= t; ++k) acc -= den[k] * y[t - k];
        y[t] = acc;
    }
    return y;
}

std::vector<double> shifted(std::span<const double> x, std::size_t lag) {
    std::vector<double> y(x.size(), 0.0);
    for (std::size_t t = lag; t < x.size(); ++t) y[t] = x[t - lag];
    return y;
}

double sum_squares(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

double rms_of(std::span<const double> x) {
    return std::sqrt(sum_squares(x) / static_cast<double>(x.size()));
}

bool all_finite(std::span<const double> x) {
    for (double v : x) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

double variance_of(std::span<const double> x) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return ss / static_cast<double>(x.size());
}

// Least squares solve; returns empty on numerically void problems.
Eigen::VectorXd solve_ls(const Eigen::MatrixXd& X, const Eigen::VectorXd& t) {
    if (X.rows() == 0 || X.cols() == 0) return Eigen::VectorXd();
    Eigen::VectorXd sol = X.colPivHouseholderQr().solve(t);
    if (!sol.allFinite()) sol.setZero();
    return sol;
}

}  // namespace

void Polynomial::validate() const {
    if (coeffs.empty()) throw Error(Errc::InvalidSpec, "polynomial has no coefficients");
    if (monic && coeffs[0] != 1.0) {
        throw Error(Errc::InvalidSpec, "monic polynomial must have leading coefficient 1");
    }
    for (double c : coeffs) {
        if (!std::isfinite(c)) {
            throw Error(Errc::InvalidSpec, "polynomial coefficient is not finite");
        }
    }
}

std::complex<double> Polynomial::eval(std::complex<double> z_inv) const {
    std::complex<double> acc{0.0, 0.0};
    // Horner in ascending powers of q^-1.
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z_inv + *it;
    return acc;
}

std::vector<std::complex<double>> Polynomial::roots() const {
    validate();
    // Trim trailing (highest-lag) zeros; they contribute roots at the origin
    // of the z^-1 plane, i.e. no pole/zero of interest.
    std::size_t deg = coeffs.size() - 1;
    while (deg > 0 && coeffs[deg] == 0.0) --deg;
    if (deg == 0) return {};

    // Companion matrix of z^deg + (c1/c0) z^(deg-1) + ... + (cdeg/c0).
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(deg),
                                                 static_cast<Eigen::Index>(deg));
    for (std::size_t i = 0; i < deg; ++i) {
        comp(0, static_cast<Eigen::Index>(i)) = -coeffs[i + 1] / coeffs[0];
        if (i + 1 < deg) {
            comp(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i)) = 1.0;
        }
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, /*computeEigenvectors=*/false);
    std::vector<std::complex<double>> out;
    out.reserve(deg);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        out.push_back(es.eigenvalues()(i));
    }
    return out;
}

bool Polynomial::stable() const {
    for (const auto& r : roots()) {
        if (std::abs(r) >= 1.0) return false;
    }
    return true;
}

Polynomial Polynomial::stabilized() const {
    auto rs = roots();
    bool changed = false;
    for (auto& r : rs) {
        double mag = std::abs(r);
        if (mag >= 1.0) {
            r = r / (mag * mag);  // 1 / conj(r)
            mag = std::abs(r);
            if (mag >= kStabilityMargin) r *= kStabilityMargin / mag;
            changed = true;
        }
    }
    if (!changed) return *this;

    // Rebuild from roots; conjugate pairs keep the product real.
    std::size_t deg = coeffs.size() - 1;
    while (deg > 0 && coeffs[deg] == 0.0) --deg;
    std::vector<std::complex<double>> poly{1.0};
    for (const auto& r : rs) {
        std::vector<std::complex<double>> next(poly.size() + 1, 0.0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i] += poly[i];
            next[i + 1] -= poly[i] * r;
        }
        poly = std::move(next);
    }
    Polynomial out = *this;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        out.coeffs[i] = coeffs[0] * poly[i].real();
    }
    if (monic) out.coeffs[0] = 1.0;
    return out;
}

Polynomial Polynomial::monic_identity(std::size_t order_n) {
    Polynomial p;
    p.monic = true;
    p.coeffs.assign(order_n + 1, 0.0);
    p.coeffs[0] = 1.0;
    return p;
}

void BoxJenkinsModel::validate() const {
    b.validate();
    a.validate();
    c.validate();
    d.validate();
    if (!a.monic || !c.monic || !d.monic) {
        throw Error(Errc::InvalidSpec, "A, C, D must be monic");
    }
    if (rate_hz <= 0.0) throw Error(Errc::InvalidSpec, "model rate must be > 0");
}

std::vector<double> simulate(const BoxJenkinsModel& model, std::span<const double> u) {
    model.validate();
    if (u.empty()) throw Error(Errc::EmptyInput, "simulate requires a nonempty input");
    if (!model.a.stable()) {
        throw Error(Errc::UnstableModel, "system denominator A has poles outside the unit circle");
    }
    const std::vector<double> u_d = shifted(u, model.input_delay);
    return filter_ratio(model.b.coeffs, model.a.coeffs, u_d);
}

PredictionTrace predict_one_step(const BoxJenkinsModel& model, std::span<const double> u,
                                 std::span<const double> y) {
    if (u.size() != y.size()) {
        throw Error(Errc::LengthMismatch, "u and y must have equal length");
    }
    if (!model.c.stable()) {
        throw Error(Errc::NonInvertibleNoiseModel,
                    "noise numerator C has roots on or outside the unit circle");
    }
    PredictionTrace trace;
    trace.y_measured.assign(y.begin(), y.end());
    trace.y_simulated = simulate(model, u);

    // e = (D/C) (y - y_sim); y_hat = y - e.
    std::vector<double> v(y.size());
    for (std::size_t t = 0; t < y.size(); ++t) v[t] = y[t] - trace.y_simulated[t];
    trace.residuals = filter_ratio(model.d.coeffs, model.c.coeffs, v);
    trace.y_predicted.resize(y.size());
    for (std::size_t t = 0; t < y.size(); ++t) {
        trace.y_predicted[t] = y[t] - trace.residuals[t];
    }
    return trace;
}

namespace {

// Free parameters are packed [b(0..nb-1), a(1..na), c(1..nc), d(1..nd)].
struct ParamLayout {
    FitOrders orders;
    std::size_t count() const {
        return orders.nb + orders.na + orders.nc + orders.nd;
    }
};

BoxJenkinsModel unpack(const Eigen::VectorXd& theta, const ParamLayout& layout,
                       double rate_hz, std::size_t delay) {
    BoxJenkinsModel m;
    m.rate_hz = rate_hz;
    m.input_delay = delay;
    std::size_t at = 0;
    m.b.monic = false;
    m.b.coeffs.assign(layout.orders.nb, 0.0);
    for (std::size_t k = 0; k < layout.orders.nb; ++k) m.b.coeffs[k] = theta(at++);
    m.a = Polynomial::monic_identity(layout.orders.na);
    for (std::size_t k = 1; k <= layout.orders.na; ++k) m.a.coeffs[k] = theta(at++);
    m.c = Polynomial::monic_identity(layout.orders.nc);
    for (std::size_t k = 1; k <= layout.orders.nc; ++k) m.c.coeffs[k] = theta(at++);
    m.d = Polynomial::monic_identity(layout.orders.nd);
    for (std::size_t k = 1; k <= layout.orders.nd; ++k) m.d.coeffs[k] = theta(at++);
    return m;
}

Eigen::VectorXd pack(const BoxJenkinsModel& m, const ParamLayout& layout) {
    Eigen::VectorXd theta(layout.count());
    std::size_t at = 0;
    for (std::size_t k = 0; k < layout.orders.nb; ++k) theta(at++) = m.b.coeffs[k];
    for (std::size_t k = 1; k <= layout.orders.na; ++k) theta(at++) = m.a.coeffs[k];
    for (std::size_t k = 1; k <= layout.orders.nc; ++k) theta(at++) = m.c.coeffs[k];
    for (std::size_t k = 1; k <= layout.orders.nd; ++k) theta(at++) = m.d.coeffs[k];
    return theta;
}

BoxJenkinsModel stabilize(BoxJenkinsModel m) {
    m.a = m.a.stabilized();
    m.c = m.c.stabilized();
    m.d = m.d.stabilized();
    return m;
}

// Prediction error, or empty when the candidate model blows up numerically.
std::vector<double> prediction_error(const BoxJenkinsModel& m,
                                     std::span<const double> u_d,
                                     std::span<const double> y) {
    const std::vector<double> w = filter_ratio(m.b.coeffs, m.a.coeffs, u_d);
    if (!all_finite(w)) return {};
    std::vector<double> v(y.size());
    for (std::size_t t = 0; t < y.size(); ++t) v[t] = y[t] - w[t];
    std::vector<double> e = filter_ratio(m.d.coeffs, m.c.coeffs, v);
    if (!all_finite(e)) return {};
    return e;
}

// ARX least squares at the target orders:
//   y(t) = sum_k b_k u_d(t-k+1) - sum_k a_k y(t-k) + eps(t).
void init_system_arx(std::span<const double> u_d, std::span<const double> y,
                     const FitOrders& orders, BoxJenkinsModel& m) {
    const std::size_t n = y.size();
    const std::size_t t0 = std::max(orders.na, orders.nb - 1) + 1;
    const std::size_t rows = n - t0;
    const std::size_t cols = orders.nb + orders.na;
    Eigen::MatrixXd X(rows, cols);
    Eigen::VectorXd t(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t ti = t0 + r;
        std::size_t c = 0;
        for (std::size_t k = 0; k < orders.nb; ++k) X(r, c++) = u_d[ti - k];
        for (std::size_t k = 1; k <= orders.na; ++k) X(r, c++) = -y[ti - k];
        t(r) = y[ti];
    }
    const Eigen::VectorXd sol = solve_ls(X, t);
    for (std::size_t k = 0; k < orders.nb; ++k) m.b.coeffs[k] = sol(k);
    for (std::size_t k = 1; k <= orders.na; ++k) m.a.coeffs[k] = sol(orders.nb + k - 1);
}

// Hannan-Rissanen style start for the noise path: a long AR fit on the
// simulation residual v estimates the innovations, then C and D come from
// one linear regression of v on lagged innovations and lagged v.
void init_noise_hr(std::span<const double> v, const FitOrders& orders,
                   BoxJenkinsModel& m) {
    const std::size_t n = v.size();
    const double var_v = variance_of(v);
    if (var_v < 1e-30) return;  // residual is numerically zero; keep identity noise

    const std::size_t ar_order =
        std::min<std::size_t>(std::max<std::size_t>(10, 2 * (orders.nc + orders.nd)),
                              n / 4);
    Eigen::MatrixXd X(n - ar_order, ar_order);
    Eigen::VectorXd t(n - ar_order);
    for (std::size_t r = 0; r < n - ar_order; ++r) {
        const std::size_t ti = ar_order + r;
        for (std::size_t k = 1; k <= ar_order; ++k) X(r, k - 1) = -v[ti - k];
        t(r) = v[ti];
    }
    const Eigen::VectorXd phi = solve_ls(X, t);

    std::vector<double> eps(n, 0.0);
    for (std::size_t ti = ar_order; ti < n; ++ti) {
        double acc = v[ti];
        for (std::size_t k = 1; k <= ar_order; ++k) acc += phi(k - 1) * v[ti - k];
        eps[ti] = acc;
    }

    const std::size_t t0 = std::max({orders.nc, orders.nd, ar_order}) + 1;
    if (t0 >= n) return;
    const std::size_t rows = n - t0;
    Eigen::MatrixXd Xn(rows, orders.nc + orders.nd);
    Eigen::VectorXd tn(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t ti = t0 + r;
        std::size_t c = 0;
        for (std::size_t k = 1; k <= orders.nc; ++k) Xn(r, c++) = eps[ti - k];
        for (std::size_t k = 1; k <= orders.nd; ++k) Xn(r, c++) = -v[ti - k];
        tn(r) = v[ti] - eps[ti];
    }
    const Eigen::VectorXd sol = solve_ls(Xn, tn);
    if (sol.size() == 0) return;
    for (std::size_t k = 1; k <= orders.nc; ++k) m.c.coeffs[k] = sol(k - 1);
    for (std::size_t k = 1; k <= orders.nd; ++k) m.d.coeffs[k] = sol(orders.nc + k - 1);
}

}  // namespace

std::pair<BoxJenkinsModel, FitReport> fit_bj(std::span<const double> u,
                                             std::span<const double> y,
                                             const FitOrders& orders,
                                             const FitOptions& options, double rate_hz,
                                             std::size_t input_delay) {
    if (u.size() != y.size()) {
        throw Error(Errc::LengthMismatch, "u and y must have equal length");
    }
    if (orders.nb < 1 || orders.na < 1 || orders.nc < 1 || orders.nd < 1) {
        throw Error(Errc::InvalidSpec, "all polynomial orders must be >= 1");
    }
    const std::size_t n_params = orders.nb + orders.na + orders.nc + orders.nd;
    if (u.size() < 10 * n_params) {
        throw Error(Errc::InsufficientData,
                    "need at least " + std::to_string(10 * n_params) + " samples, got " +
                        std::to_string(u.size()));
    }
    if (variance_of(u) == 0.0) {
        throw Error(Errc::DegenerateInput, "input u has zero variance");
    }

    const ParamLayout layout{orders};
    const std::vector<double> u_d = shifted(u, input_delay);

    // Starting point: ARX for the system path, Hannan-Rissanen for the noise.
    BoxJenkinsModel model;
    model.rate_hz = rate_hz;
    model.input_delay = input_delay;
    model.b.monic = false;
    model.b.coeffs.assign(orders.nb, 0.0);
    model.a = Polynomial::monic_identity(orders.na);
    model.c = Polynomial::monic_identity(orders.nc);
    model.d = Polynomial::monic_identity(orders.nd);
    init_system_arx(u_d, y, orders, model);
    model = stabilize(model);

    {
        const std::vector<double> w = filter_ratio(model.b.coeffs, model.a.coeffs, u_d);
        std::vector<double> v(y.size());
        for (std::size_t t = 0; t < y.size(); ++t) v[t] = y[t] - w[t];
        init_noise_hr(v, orders, model);
        model = stabilize(model);
    }

    std::vector<double> e = prediction_error(model, u_d, y);
    if (e.empty()) {
        // Pathological start; fall back to a neutral model.
        model.b.coeffs.assign(orders.nb, 0.0);
        model.a = Polynomial::monic_identity(orders.na);
        model.c = Polynomial::monic_identity(orders.nc);
        model.d = Polynomial::monic_identity(orders.nd);
        e = prediction_error(model, u_d, y);
    }
    double cost = sum_squares(e);

    const std::size_t n = y.size();
    const std::size_t p = layout.count();
    Eigen::MatrixXd jac(n, p);
    double lambda = 1e-3;
    std::size_t iterations = 0;
    bool converged = false;

    for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
        iterations = iter + 1;

        // Gradient filters. With G = B/A and H = C/D:
        //   de/db_k = -(D/(C A)) u_d (t-k+1)
        //   de/da_k = +(D/(C A)) w   (t-k)
        //   de/dc_k = -(1/C) e       (t-k)
        //   de/dd_k = +(1/C) v       (t-k)
        const std::vector<double> w = filter_ratio(model.b.coeffs, model.a.coeffs, u_d);
        std::vector<double> v(n);
        for (std::size_t t = 0; t < n; ++t) v[t] = y[t] - w[t];

        const std::vector<double> one{1.0};
        const std::vector<double> u_over_a = filter_ratio(one, model.a.coeffs, u_d);
        const std::vector<double> phi_b =
            filter_ratio(model.d.coeffs, model.c.coeffs, u_over_a);
        const std::vector<double> w_over_a = filter_ratio(one, model.a.coeffs, w);
        const std::vector<double> phi_a =
            filter_ratio(model.d.coeffs, model.c.coeffs, w_over_a);
        const std::vector<double> phi_c = filter_ratio(one, model.c.coeffs, e);
        const std::vector<double> phi_d = filter_ratio(one, model.c.coeffs, v);

        std::size_t col = 0;
        for (std::size_t k = 0; k < orders.nb; ++k, ++col) {
            for (std::size_t t = 0; t < n; ++t) {
                jac(t, col) = (t >= k) ? -phi_b[t - k] : 0.0;
            }
        }
        for (std::size_t k = 1; k <= orders.na; ++k, ++col) {
            for (std::size_t t = 0; t < n; ++t) {
                jac(t, col) = (t >= k) ? phi_a[t - k] : 0.0;
            }
        }
        for (std::size_t k = 1; k <= orders.nc; ++k, ++col) {
            for (std::size_t t = 0; t < n; ++t) {
                jac(t, col) = (t >= k) ? -phi_c[t - k] : 0.0;
            }
        }
        for (std::size_t k = 1; k <= orders.nd; ++k, ++col) {
            for (std::size_t t = 0; t < n; ++t) {
                jac(t, col) = (t >= k) ? phi_d[t - k] : 0.0;
            }
        }

        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        Eigen::VectorXd grad(p);
        {
            Eigen::Map<const Eigen::VectorXd> evec(e.data(),
                                                   static_cast<Eigen::Index>(n));
            grad = jac.transpose() * evec;
        }
        const double diag_floor = 1e-10 * jtj.diagonal().maxCoeff() + 1e-30;

        bool accepted = false;
        for (int attempt = 0; attempt < 30; ++attempt) {
            Eigen::MatrixXd damped = jtj;
            for (std::size_t i = 0; i < p; ++i) {
                damped(i, i) += lambda * std::max(jtj(i, i), diag_floor) + diag_floor;
            }
            const Eigen::VectorXd step = damped.ldlt().solve(-grad);
            if (!step.allFinite()) {
                lambda *= 10.0;
                continue;
            }
            const Eigen::VectorXd theta = pack(model, layout) + step;
            BoxJenkinsModel candidate =
                stabilize(unpack(theta, layout, rate_hz, input_delay));
            const std::vector<double> e_new = prediction_error(candidate, u_d, y);
            if (!e_new.empty()) {
                const double cost_new = sum_squares(e_new);
                if (cost_new < cost) {
                    model = std::move(candidate);
                    e = e_new;
                    const double rel = (cost - cost_new) / std::max(cost, 1e-300);
                    cost = cost_new;
                    lambda = std::max(lambda * 0.1, 1e-12);
                    accepted = true;
                    if (rel < options.rel_tolerance || cost == 0.0) converged = true;
                    break;
                }
            }
            lambda *= 10.0;
        }
        if (!accepted) {
            // No descent direction left at any damping: treat as converged.
            converged = true;
        }
        if (converged) break;
    }

    FitReport report;
    report.orders = orders;
    report.iterations = iterations;
    report.converged = converged;

    const PredictionTrace trace = predict_one_step(model, u, y);
    report.rmse_simulated = rmse(y, trace.y_simulated);
    report.rmse_predicted = rmse(y, trace.y_predicted);
    report.nrmse_fit_percent = nrmse_fit(y, trace.y_predicted);
    const double rms_meas = rms_of(y);
    const double rms_pred = rms_of(trace.y_predicted);
    report.rms_discrepancy_percent =
        rms_meas > 0.0 ? 100.0 * std::abs(rms_pred - rms_meas) / rms_meas : 0.0;
    return {model, report};
}

FrequencyResponse frequency_response(const BoxJenkinsModel& model,
                                     std::span<const double> freqs_hz) {
    model.validate();
    FrequencyResponse out;
    out.freqs_hz.assign(freqs_hz.begin(), freqs_hz.end());
    out.gain_system.reserve(freqs_hz.size());
    out.gain_noise.reserve(freqs_hz.size());
    for (double f : freqs_hz) {
        if (f < 0.0 || f > model.rate_hz / 2.0) {
            throw Error(Errc::FrequencyOutOfRange,
                        std::to_string(f) + " Hz outside [0, " +
                            std::to_string(model.rate_hz / 2.0) + "]");
        }
        const std::complex<double> z_inv =
            std::polar(1.0, -2.0 * std::numbers::pi * f / model.rate_hz);
        out.gain_system.push_back(std::abs(model.b.eval(z_inv) / model.a.eval(z_inv)));
        out.gain_noise.push_back(std::abs(model.c.eval(z_inv) / model.d.eval(z_inv)));
    }
    return out;
}

double nrmse_fit(std::span<const double> y, std::span<const double> y_hat) {
    if (y.size() != y_hat.size()) {
        throw Error(Errc::LengthMismatch, "y and y_hat must have equal length");
    }
    if (y.empty()) throw Error(Errc::EmptyInput, "nrmse_fit of empty sequences");

    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(y.size());

    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        num += (y[i] - y_hat[i]) * (y[i] - y_hat[i]);
        den += (y[i] - mean) * (y[i] - mean);
    }
    if (den == 0.0) {
        throw Error(Errc::ConstantReference, "reference sequence is constant");
    }
    return 100.0 * (1.0 - std::sqrt(num / den));
}

double rmse(std::span<const double> y, std::span<const double> y_hat) {
    if (y.size() != y_hat.size()) {
        throw Error(Errc::LengthMismatch, "y and y_hat must have equal length");
    }
    if (y.empty()) throw Error(Errc::EmptyInput, "rmse of empty sequences");
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        s += (y[i] - y_hat[i]) * (y[i] - y_hat[i]);
    }
    return std::sqrt(s / static_cast<double>(y.size()));
}

std::vector<OrderSweepEntry> order_sweep(std::span<const double> u,
                                         std::span<const double> y,
                                         std::span<const std::size_t> orders,
                                         const FitOptions& options, double rate_hz,
                                         std::size_t input_delay) {
    if (orders.empty()) throw Error(Errc::EmptyInput, "order range is empty");

    std::vector<OrderSweepEntry> entries;
    entries.reserve(orders.size());
    for (std::size_t n : orders) {
        OrderSweepEntry entry;
        entry.order = n;
        try {
            auto [model, report] =
                fit_bj(u, y, FitOrders{n, n, n, n}, options, rate_hz, input_delay);
            entry.report = report;
        } catch (const Error& err) {
            entry.error = err.what();
        }
        entries.push_back(std::move(entry));
    }
    std::sort(entries.begin(), entries.end(),
              [](const OrderSweepEntry& l, const OrderSweepEntry& r) {
                  return l.order < r.order;
              });

    double best = std::numeric_limits<double>::infinity();
    for (const auto& e : entries) {
        if (e.report) best = std::min(best, e.report->rmse_predicted);
    }
    // Smallest order within 1% of the best predicted error wins the flag.
    for (auto& e : entries) {
        if (e.report && e.report->rmse_predicted <= 1.01 * best) {
            e.recommended = true;
            break;
        }
    }
    return entries;
}

namespace {

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_poly(std::ostringstream& os, const char* name, const Polynomial& p) {
    os << name;
    for (double c : p.coeffs) os << ' ' << format_full(c);
    os << '\n';
}

}  // namespace

std::string serialize_model(const BoxJenkinsModel& model, const FitReport& report) {
    model.validate();
    std::ostringstream os;
    os << "havmon bj-model v1\n";
    os << "rate_hz " << format_full(model.rate_hz) << '\n';
    os << "input_delay " << model.input_delay << '\n';
    os << "orders " << report.orders.nb << ' ' << report.orders.na << ' '
       << report.orders.nc << ' ' << report.orders.nd << '\n';
    write_poly(os, "b", model.b);
    write_poly(os, "a", model.a);
    write_poly(os, "c", model.c);
    write_poly(os, "d", model.d);
    os << "nrmse_fit_percent " << format_full(report.nrmse_fit_percent) << '\n';
    os << "rmse_simulated " << format_full(report.rmse_simulated) << '\n';
    os << "rmse_predicted " << format_full(report.rmse_predicted) << '\n';
    os << "rms_discrepancy_percent " << format_full(report.rms_discrepancy_percent)
       << '\n';
    os << "iterations " << report.iterations << '\n';
    os << "converged " << (report.converged ? 1 : 0) << '\n';
    return os.str();
}

std::pair<BoxJenkinsModel, FitReport> parse_model(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != "havmon bj-model v1") {
        throw Error(Errc::UnknownFormat, "not a havmon model document");
    }

    BoxJenkinsModel model;
    FitReport report;
    auto read_poly = [](std::istringstream& ls, bool monic) {
        Polynomial p;
        p.monic = monic;
        double v;
        while (ls >> v) p.coeffs.push_back(v);
        if (p.coeffs.empty()) throw Error(Errc::ParseError, "empty polynomial");
        return p;
    };

    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "rate_hz") ls >> model.rate_hz;
        else if (key == "input_delay") ls >> model.input_delay;
        else if (key == "orders") {
            ls >> report.orders.nb >> report.orders.na >> report.orders.nc >>
                report.orders.nd;
        } else if (key == "b") model.b = read_poly(ls, false);
        else if (key == "a") model.a = read_poly(ls, true);
        else if (key == "c") model.c = read_poly(ls, true);
        else if (key == "d") model.d = read_poly(ls, true);
        else if (key == "nrmse_fit_percent") ls >> report.nrmse_fit_percent;
        else if (key == "rmse_simulated") ls >> report.rmse_simulated;
        else if (key == "rmse_predicted") ls >> report.rmse_predicted;
        else if (key == "rms_discrepancy_percent") ls >> report.rms_discrepancy_percent;
        else if (key == "iterations") ls >> report.iterations;
        else if (key == "converged") {
            int c = 0;
            ls >> c;
            report.converged = c != 0;
        } else {
            throw Error(Errc::ParseError, "unknown model field '" + key + "'");
        }
    }
    model.validate();
    return {model, report};
}

}  // namespace havmon
