#include "havmon/filter.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace havmon {

bool Biquad::stable() const {
    return std::abs(a2) < 1.0 && std::abs(a1) < 1.0 + a2;
}

Biquad bilinear_biquad(double B2, double B1, double B0, double A2, double A1, double A0,
                       double K) {
    const double K2 = K * K;
    const double b0 = B2 * K2 + B1 * K + B0;
    const double b1 = 2.0 * (B0 - B2 * K2);
    const double b2 = B2 * K2 - B1 * K + B0;
    const double a0 = A2 * K2 + A1 * K + A0;
    const double a1 = 2.0 * (A0 - A2 * K2);
    const double a2 = A2 * K2 - A1 * K + A0;
    return {b0 / a0, b1 / a0, b2 / a0, a1 / a0, a2 / a0};
}

double prewarp_k(double f_hz, double rate_hz) {
    const double w = 2.0 * std::numbers::pi * f_hz;
    return w / std::tan(w / (2.0 * rate_hz));
}

Biquad design_lowpass_section(double f_hz, double q, double rate_hz) {
    const double w = 2.0 * std::numbers::pi * f_hz;
    return bilinear_biquad(0.0, 0.0, w * w, 1.0, w / q, w * w, prewarp_k(f_hz, rate_hz));
}

Biquad design_highpass_section(double f_hz, double q, double rate_hz) {
    const double w = 2.0 * std::numbers::pi * f_hz;
    return bilinear_biquad(1.0, 0.0, 0.0, 1.0, w / q, w * w, prewarp_k(f_hz, rate_hz));
}

DigitalFilter::DigitalFilter(std::vector<Biquad> sections, double rate_hz)
    : sections_(std::move(sections)), rate_hz_(rate_hz) {
    if (rate_hz_ <= 0.0) {
        throw Error(Errc::InvalidSpec, "filter rate must be positive");
    }
    if (!stable()) {
        throw Error(Errc::UnstableModel, "filter section has poles on or outside the unit circle");
    }
}

bool DigitalFilter::stable() const {
    for (const auto& s : sections_) {
        if (!s.stable()) return false;
    }
    return true;
}

double DigitalFilter::magnitude(double f_hz) const {
    const std::complex<double> z =
        std::polar(1.0, -2.0 * std::numbers::pi * f_hz / rate_hz_);
    std::complex<double> h{1.0, 0.0};
    for (const auto& s : sections_) {
        h *= (s.b0 + s.b1 * z + s.b2 * z * z) / (1.0 + s.a1 * z + s.a2 * z * z);
    }
    return std::abs(h);
}

std::vector<double> DigitalFilter::apply(std::span<const double> x) const {
    std::vector<double> y(x.begin(), x.end());
    for (const auto& s : sections_) {
        // Direct form II transposed, zero initial state.
        double s1 = 0.0, s2 = 0.0;
        for (double& v : y) {
            const double u = v;
            v = s.b0 * u + s1;
            s1 = s.b1 * u - s.a1 * v + s2;
            s2 = s.b2 * u - s.a2 * v;
        }
    }
    return y;
}

}  // namespace havmon
