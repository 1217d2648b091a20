#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "havmon/stats.hpp"
#include "test_util.hpp"

using namespace havmon;
using havtest::error_code_of;
using havtest::rel_err;

TEST_SUITE("stats") {

TEST_CASE("incomplete beta closed forms") {
    // I_x(1,1) = x
    for (double x : {0.0, 0.1, 0.37, 0.5, 0.93, 1.0})
        CHECK(incomplete_beta(x, 1.0, 1.0) == doctest::Approx(x).epsilon(1e-14));

    // I_x(a,1) = x^a
    CHECK(rel_err(incomplete_beta(0.4, 3.0, 1.0), std::pow(0.4, 3.0)) < 1e-12);
    CHECK(rel_err(incomplete_beta(0.9, 7.5, 1.0), std::pow(0.9, 7.5)) < 1e-12);

    // symmetry I_x(a,b) = 1 - I_{1-x}(b,a)
    for (double x : {0.05, 0.3, 0.62, 0.97}) {
        const double lhs = incomplete_beta(x, 2.5, 4.0);
        const double rhs = 1.0 - incomplete_beta(1.0 - x, 4.0, 2.5);
        CHECK(std::abs(lhs - rhs) < 1e-13);
    }

    CHECK(incomplete_beta(0.0, 2.0, 3.0) == 0.0);
    CHECK(incomplete_beta(1.0, 2.0, 3.0) == 1.0);
}

TEST_CASE("t tail reference values") {
    // two-sided p for t=2, df=10; reference 0.073388034770740366
    CHECK(rel_err(t_tail(2.0, 10), 0.073388034770740366) < 1e-12);
    CHECK(t_tail(0.0, 7) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(t_tail(-2.0, 10) == doctest::Approx(t_tail(2.0, 10)).epsilon(1e-14));

    // df=1 is a Cauchy: p = 1 - 2*atan(t)/pi
    const double expect = 1.0 - 2.0 * std::atan(3.0) / std::numbers::pi;
    CHECK(rel_err(t_tail(3.0, 1), expect) < 1e-12);

    CHECK(t_tail(std::numeric_limits<double>::infinity(), 5) == 0.0);
}

TEST_CASE("f tail reference values") {
    // F(1, df) tail at t^2 equals the two-sided t tail at t
    CHECK(rel_err(f_tail(4.0, 1, 10), t_tail(2.0, 10)) < 1e-12);
    CHECK(f_tail(0.0, 3, 7) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(f_tail(std::numeric_limits<double>::infinity(), 2, 9) == 0.0);
}

TEST_CASE("paired t on a known difference vector") {
    // d = x - y = [1,2,3,4]: mean 2.5, sd sqrt(5/3), t = 2.5/sqrt(5/12)
    const std::vector<double> x = {2.0, 4.0, 6.0, 8.0};
    const std::vector<double> y = {1.0, 2.0, 3.0, 4.0};
    const TTestResult r = paired_t_test(x, y);
    CHECK(rel_err(r.t, 2.5 / std::sqrt(5.0 / 12.0)) < 1e-12);
    CHECK(r.df == 3);
    CHECK(r.n_pairs == 4);
    CHECK(r.mean_diff == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(rel_err(r.p_two_sided, 0.030466291662171) < 1e-9);
}

TEST_CASE("paired t antisymmetry and shift invariance") {
    const std::vector<double> x = {1.2, 0.7, 3.1, 2.2, 1.9};
    const std::vector<double> y = {0.8, 1.1, 2.0, 2.4, 1.0};
    const TTestResult fwd = paired_t_test(x, y);
    const TTestResult rev = paired_t_test(y, x);
    CHECK(fwd.t == doctest::Approx(-rev.t).epsilon(1e-14));
    CHECK(fwd.p_two_sided == doctest::Approx(rev.p_two_sided).epsilon(1e-14));

    std::vector<double> xs = x, ys = y;
    for (auto& v : xs) v += 100.0;
    for (auto& v : ys) v += 100.0;
    const TTestResult shifted = paired_t_test(xs, ys);
    CHECK(rel_err(shifted.t, fwd.t) < 1e-10);
}

TEST_CASE("paired t error paths") {
    const std::vector<double> a = {1.0, 2.0, 3.0};
    const std::vector<double> b = {1.0, 2.0};
    CHECK(error_code_of([&] { paired_t_test(a, b); }) == Errc::LengthMismatch);

    const std::vector<double> one = {1.0};
    CHECK(error_code_of([&] { paired_t_test(one, one); }) == Errc::TooFewPairs);

    // constant difference -> zero variance
    const std::vector<double> x = {1.0, 2.0, 3.0};
    const std::vector<double> y = {0.0, 1.0, 2.0};
    CHECK(error_code_of([&] { paired_t_test(x, y); }) == Errc::ZeroVarianceDifferences);
}

TEST_CASE("regression on a three-point line with one outlier") {
    // x=[1,2,3], y=[1,2,4]: slope 3/2, intercept -2/3, r2=27/28, f=27
    const std::vector<double> x = {1.0, 2.0, 3.0};
    const std::vector<double> y = {1.0, 2.0, 4.0};
    const RegressionResult r = linear_regression(x, y);
    CHECK(rel_err(r.slope, 1.5) < 1e-13);
    CHECK(rel_err(r.intercept, -2.0 / 3.0) < 1e-13);
    CHECK(rel_err(r.r2, 27.0 / 28.0) < 1e-13);
    CHECK(rel_err(r.adj_r2, 13.0 / 14.0) < 1e-13);
    CHECK(rel_err(r.f_stat, 27.0) < 1e-12);
    CHECK(r.df1 == 1);
    CHECK(r.df2 == 1);
    // F(1,1) tail has closed form 1 - 2*atan(sqrt(f))/pi
    const double p_expect = 1.0 - 2.0 * std::atan(std::sqrt(27.0)) / std::numbers::pi;
    CHECK(rel_err(r.p, p_expect) < 1e-11);
}

TEST_CASE("regression identities") {
    const std::vector<double> x = {0.3, 1.1, 2.4, 3.0, 4.7, 5.1};
    const std::vector<double> y = {1.0, 1.9, 2.2, 4.4, 4.1, 6.3};
    const RegressionResult r = linear_regression(x, y);

    // r2 equals the squared correlation
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) { sx += x[i]; sy += y[i]; }
    const double mx = sx / x.size(), my = sy / y.size();
    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    const double corr = sxy / std::sqrt(sxx * syy);
    CHECK(rel_err(r.r2, corr * corr) < 1e-12);

    // F = t^2 where t is the slope statistic
    const std::size_t n = x.size();
    const double resid_var = (syy - r.slope * sxy) / double(n - 2);
    const double se_slope = std::sqrt(resid_var / sxx);
    const double t_slope = r.slope / se_slope;
    CHECK(rel_err(r.f_stat, t_slope * t_slope) < 1e-10);
    CHECK(rel_err(r.p, t_tail(t_slope, n - 2)) < 1e-10);
}

TEST_CASE("regression perfect fit clamps cleanly") {
    const std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
    const std::vector<double> y = {3.0, 5.0, 7.0, 9.0};
    const RegressionResult r = linear_regression(x, y);
    CHECK(r.r2 == 1.0);
    CHECK(std::isinf(r.f_stat));
    CHECK(r.p == 0.0);
    CHECK(rel_err(r.slope, 2.0) < 1e-13);
}

TEST_CASE("adjusted r2 can go negative") {
    // nearly flat noise: r2 tiny, adj r2 = 1 - (1-r2)(n-1)/(n-2) < 0
    const std::vector<double> x = {1.0, 2.0, 3.0, 4.0, 5.0};
    const std::vector<double> y = {1.0, -1.0, 1.1, -0.9, 1.0};
    const RegressionResult r = linear_regression(x, y);
    const double expect = 1.0 - (1.0 - r.r2) * double(x.size() - 1) / double(x.size() - 2);
    CHECK(rel_err(r.adj_r2, expect) < 1e-12);
    CHECK(r.adj_r2 < 0.0);
}

TEST_CASE("regression error paths") {
    const std::vector<double> two = {1.0, 2.0};
    CHECK(error_code_of([&] { linear_regression(two, two); }) == Errc::TooFewPoints);

    const std::vector<double> xc = {2.0, 2.0, 2.0};
    const std::vector<double> y = {1.0, 2.0, 3.0};
    CHECK(error_code_of([&] { linear_regression(xc, y); }) == Errc::ConstantPredictor);
    CHECK(error_code_of([&] { linear_regression(y, xc); }) == Errc::ConstantResponse);

    const std::vector<double> a = {1.0, 2.0, 3.0};
    const std::vector<double> b = {1.0, 2.0};
    CHECK(error_code_of([&] { linear_regression(a, b); }) == Errc::LengthMismatch);
}

TEST_CASE("tail functions reject bad degrees of freedom") {
    CHECK(error_code_of([&] { t_tail(1.0, 0); }) == Errc::InvalidDegreesOfFreedom);
    CHECK(error_code_of([&] { f_tail(1.0, 0, 3); }) == Errc::InvalidDegreesOfFreedom);
    CHECK(error_code_of([&] { f_tail(1.0, 3, 0); }) == Errc::InvalidDegreesOfFreedom);
}

}  // TEST_SUITE
