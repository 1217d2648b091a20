#pragma once

#include "havmon/signal.hpp"

namespace havmon {

// Initial gravity estimate for the recursive estimator. FirstSample is the
// default: the wearer holds the tool still before work starts, so the first
// sample approximates the static gravity orientation.
enum class GravityInit { FirstSample, Zero, Given };

struct GravityEstimatorConfig {
    double beta = 0.05;  // EMA weight on the newest sample, in (0, 1)
    GravityInit init_policy = GravityInit::FirstSample;
    Vec3 initial{};      // used when init_policy == Given

    void validate() const;
};

struct GravityEstimatorState {
    Vec3 g_est{};
};

// One step of the gravity tracker: g' = beta * a + (1 - beta) * g.
GravityEstimatorState estimate_gravity_step(const GravityEstimatorState& state,
                                            const Vec3& sample, double beta);

// Subtracts the running gravity estimate from every sample, leaving the
// dynamic acceleration. No de-noising beyond this.
TriaxialSeries remove_gravity(const TriaxialSeries& series,
                              const GravityEstimatorConfig& config = {});

}  // namespace havmon
