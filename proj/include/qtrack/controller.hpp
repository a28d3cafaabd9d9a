#pragma once

#include <cstdint>

#include "qtrack/estimator.hpp"
#include "qtrack/plant.hpp"
#include "qtrack/reference.hpp"
#include "qtrack/types.hpp"

namespace qtrack {

// Certainty-equivalence input: y*_next / d - (theta_hat.c2 / d) * u_prev
// with d = sign(theta_hat.c1) * max(|theta_hat.c1|, epsilon_guard); sign of
// 0 counts as +. With epsilon_guard = 0 this is the raw division and the
// caller owns divergence handling.
double adaptive_control(ParamVec theta_hat, double y_star_next, double u_prev,
                        double epsilon_guard);

// Known-parameter control law; throws
// ValidationError("ZeroLeadingCoefficient") when theta.c1 == 0.
double oracle_control(ParamVec theta, double y_star_next, double u_prev);

// Adaptive-control bookkeeping across steps: the input scheduled for the
// next step and whether the guard clipped the division that produced it.
struct ControllerState {
    double u_next = 0.0;        // input to apply at the coming step
    bool guard_active = false;  // guard clipped when u_next was computed
    double epsilon_guard = 1e-6;

    // Step-1 initialisation: u(1) from theta_hat(0) and y*(1).
    void init(ParamVec theta_hat0, double y_star_1);
    // Schedule u(k+1) from theta_hat(k), y*(k+1) and u(k).
    void schedule(ParamVec theta_hat, double y_star_next, double u_curr);
};

// One closed-loop step's observables.
struct StepResult {
    double u = 0.0;       // applied input u(k)
    double y = 0.0;       // plant output y(k)
    int level = 0;        // quantizer bucket S(k)
    double s_bar = 0.0;   // weighted observation
    ParamVec theta_hat;   // estimate after the update
    double y_star = 0.0;  // reference y*(k)
    double err_sq = 0.0;  // ||theta_hat - theta||^2
    double track_sq = 0.0;
    bool guard_was_active = false; // guard clipped when u(k) was computed
};

// Runs step k = plant.k: applies the scheduled input, draws w(k) from
// `noise_stream`, quantizes, updates the estimator, and schedules u(k+1).
StepResult closed_loop_step(PlantState& plant, EstimatorState& estimator,
                            ControllerState& controller,
                            const RealizedReference& reference,
                            const TrialStream& noise_stream);

} // namespace qtrack
