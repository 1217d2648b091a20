#pragma once

#include <span>
#include <vector>

#include "havmon/errors.hpp"

namespace havmon {

// One second-order section, denominator normalized to a0 = 1:
//   y(n) = b0 u(n) + b1 u(n-1) + b2 u(n-2) - a1 y(n-1) - a2 y(n-2)
struct Biquad {
    double b0 = 1.0, b1 = 0.0, b2 = 0.0;
    double a1 = 0.0, a2 = 0.0;

    // Poles strictly inside the unit circle (stability triangle).
    bool stable() const;
};

// Bilinear transform of an analog second-order rational
//   H(s) = (B2 s^2 + B1 s + B0) / (A2 s^2 + A1 s + A0)
// with substitution s = K (1 - z^-1) / (1 + z^-1). Pick
// K = w / tan(w T / 2) to pin the response at angular frequency w
// (corner prewarping); K = 2/T is the plain transform.
Biquad bilinear_biquad(double B2, double B1, double B0, double A2, double A1, double A0,
                       double K);

// Prewarping constant for corner f_hz at the given rate.
double prewarp_k(double f_hz, double rate_hz);

// Prewarped second-order Butterworth-style sections.
Biquad design_lowpass_section(double f_hz, double q, double rate_hz);
Biquad design_highpass_section(double f_hz, double q, double rate_hz);

// Cascade of second-order sections bound to one sample rate.
class DigitalFilter {
public:
    DigitalFilter() = default;
    DigitalFilter(std::vector<Biquad> sections, double rate_hz);

    const std::vector<Biquad>& sections() const { return sections_; }
    double rate_hz() const { return rate_hz_; }

    bool stable() const;

    // |H(e^{j 2 pi f / rate})| of the full cascade.
    double magnitude(double f_hz) const;

    // Filters one channel with zero initial conditions.
    std::vector<double> apply(std::span<const double> x) const;

private:
    std::vector<Biquad> sections_;
    double rate_hz_ = 0.0;
};

}  // namespace havmon
