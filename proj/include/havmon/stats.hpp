#pragma once

#include <cstddef>
#include <span>

#include "havmon/errors.hpp"

namespace havmon {

struct TTestResult {
    double t = 0.0;
    std::size_t df = 0;        // n_pairs - 1
    double p_two_sided = 1.0;
    double mean_diff = 0.0;
    std::size_t n_pairs = 0;
};

struct RegressionResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double adj_r2 = 0.0;   // may be negative, reported as-is
    double f_stat = 0.0;
    std::size_t df1 = 1;
    std::size_t df2 = 0;   // n - 2
    double p = 1.0;
};

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double x, double a, double b);

// Two-sided Student-t tail probability.
double t_tail(double t, std::size_t df);

// Upper-tail probability of the F(d1, d2) distribution.
double f_tail(double f, std::size_t d1, std::size_t d2);

// Two-sided paired t-test on x - y, sample standard deviation (n-1).
TTestResult paired_t_test(std::span<const double> x, std::span<const double> y);

// Ordinary least squares of y on x with adjusted R^2, F statistic, and
// p from the F(1, n-2) upper tail.
RegressionResult linear_regression(std::span<const double> x, std::span<const double> y);

}  // namespace havmon
