#include "havmon/stats.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace havmon {

namespace {

// Continued fraction for the incomplete beta, modified Lentz evaluation.
double beta_cf(double x, double a, double b) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-15;
    constexpr int max_iter = 500;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;

    for (int m = 1; m <= max_iter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) break;
    }
    return h;
}

double mean_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

}  // namespace

double incomplete_beta(double x, double a, double b) {
    if (!(a > 0.0 && b > 0.0) || !(x >= 0.0 && x <= 1.0)) {
        throw Error(Errc::InvalidDegreesOfFreedom, "incomplete_beta domain violation");
    }
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;

    const double ln_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
        b * std::log1p(-x);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return std::exp(ln_front) * beta_cf(x, a, b) / a;
    }
    return 1.0 - std::exp(ln_front) * beta_cf(1.0 - x, b, a) / b;
}

double t_tail(double t, std::size_t df) {
    if (df < 1) throw Error(Errc::InvalidDegreesOfFreedom, "t tail requires df >= 1");
    const double nu = static_cast<double>(df);
    if (t == 0.0) return 1.0;
    if (std::isinf(t)) return 0.0;
    return incomplete_beta(nu / (nu + t * t), nu / 2.0, 0.5);
}

double f_tail(double f, std::size_t d1, std::size_t d2) {
    if (d1 < 1 || d2 < 1) {
        throw Error(Errc::InvalidDegreesOfFreedom, "F tail requires d1, d2 >= 1");
    }
    if (f <= 0.0) return 1.0;
    if (std::isinf(f)) return 0.0;
    const double nd1 = static_cast<double>(d1);
    const double nd2 = static_cast<double>(d2);
    return incomplete_beta(nd2 / (nd2 + nd1 * f), nd2 / 2.0, nd1 / 2.0);
}

TTestResult paired_t_test(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw Error(Errc::LengthMismatch, "paired test requires equal lengths");
    }
    const std::size_t n = x.size();
    if (n < 2) throw Error(Errc::TooFewPairs, "paired test requires at least 2 pairs");

    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = x[i] - y[i];

    const double md = mean_of(d);
    double ss = 0.0;
    for (double v : d) ss += (v - md) * (v - md);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (sd == 0.0) {
        throw Error(Errc::ZeroVarianceDifferences, "all paired differences identical");
    }

    TTestResult r;
    r.n_pairs = n;
    r.df = n - 1;
    r.mean_diff = md;
    r.t = md / (sd / std::sqrt(static_cast<double>(n)));
    r.p_two_sided = t_tail(r.t, r.df);
    return r;
}

RegressionResult linear_regression(std::span<const double> x,
                                   std::span<const double> y) {
    if (x.size() != y.size()) {
        throw Error(Errc::LengthMismatch, "regression requires equal lengths");
    }
    const std::size_t n = x.size();
    if (n < 3) throw Error(Errc::TooFewPoints, "regression requires at least 3 points");

    const double mx = mean_of(x);
    const double my = mean_of(y);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw Error(Errc::ConstantPredictor, "x has zero variance");
    if (syy == 0.0) throw Error(Errc::ConstantResponse, "y has zero variance");

    RegressionResult r;
    r.slope = sxy / sxx;
    r.intercept = my - r.slope * mx;
    r.r2 = (sxy * sxy) / (sxx * syy);
    const double nn = static_cast<double>(n);
    r.adj_r2 = 1.0 - (1.0 - r.r2) * (nn - 1.0) / (nn - 2.0);
    r.df1 = 1;
    r.df2 = n - 2;
    if (r.r2 >= 1.0) {
        r.r2 = 1.0;
        r.adj_r2 = 1.0;
        r.f_stat = std::numeric_limits<double>::infinity();
        r.p = 0.0;
    } else {
        r.f_stat = r.r2 * (nn - 2.0) / (1.0 - r.r2);
        r.p = f_tail(r.f_stat, r.df1, r.df2);
    }
    return r;
}

}  // namespace havmon
