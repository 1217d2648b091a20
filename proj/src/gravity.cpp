#include "havmon/gravity.hpp"

namespace havmon {

void GravityEstimatorConfig::validate() const {
    if (!(beta > 0.0 && beta < 1.0)) {
        throw Error(Errc::InvalidSpec, "beta must lie in (0, 1)");
    }
}

GravityEstimatorState estimate_gravity_step(const GravityEstimatorState& state,
                                            const Vec3& sample, double beta) {
    // g + beta * (a - g) rather than beta * a + (1 - beta) * g: the forms
    // agree algebraically, but only this one is a floating-point fixed point
    // once the estimate has converged (a == g gives g back exactly).
    return {state.g_est + (sample - state.g_est) * beta};
}

TriaxialSeries remove_gravity(const TriaxialSeries& series,
                              const GravityEstimatorConfig& config) {
    config.validate();
    if (series.empty()) throw Error(Errc::EmptyInput, "cannot remove gravity from empty series");

    GravityEstimatorState state;
    switch (config.init_policy) {
        case GravityInit::FirstSample: state.g_est = series.sample(0); break;
        case GravityInit::Zero: state.g_est = Vec3{}; break;
        case GravityInit::Given: state.g_est = config.initial; break;
    }

    std::vector<double> ax, ay, az;
    ax.reserve(series.size());
    ay.reserve(series.size());
    az.reserve(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        const Vec3 a = series.sample(i);
        state = estimate_gravity_step(state, a, config.beta);
        const Vec3 dyn = a - state.g_est;
        ax.push_back(dyn.x);
        ay.push_back(dyn.y);
        az.push_back(dyn.z);
    }
    return TriaxialSeries(series.meta(), series.t0(), std::move(ax), std::move(ay),
                          std::move(az));
}

}  // namespace havmon
