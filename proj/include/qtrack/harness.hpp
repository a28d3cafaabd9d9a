#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "qtrack/analysis.hpp"
#include "qtrack/controller.hpp"
#include "qtrack/estimator.hpp"
#include "qtrack/noise.hpp"
#include "qtrack/omega.hpp"
#include "qtrack/quantizer.hpp"
#include "qtrack/reference.hpp"
#include "qtrack/types.hpp"

namespace qtrack {

// Full description of one experiment. theta, quantizer and reference have
// no defaults; everything else does.
struct ExperimentConfig {
    ParamVec theta;
    QuantizerSpec quantizer;
    ReferenceSpec reference = ReferenceSpec::alternating();
    NoiseModel noise = NoiseModel::gaussian(1.0);
    OmegaSet omega = OmegaSet::box(-10.0, 10.0, -10.0, 10.0);
    std::optional<ParamVec> theta_hat0; // default: project of (1, 0)
    double epsilon_guard = 1e-6;        // 0 disables the guard
    std::int64_t horizon = 10000;       // K
    std::int64_t trials = 100;          // R
    std::uint64_t master_seed = 1;
    std::vector<std::int64_t> checkpoints; // empty: log-spaced default
    int h = 3;
    double mu = 0.0;

    ParamVec resolved_theta_hat0() const {
        return theta_hat0 ? *theta_hat0 : omega.project({1.0, 0.0});
    }
};

// Throws ValidationError naming the first violated invariant.
void validate_config(const ExperimentConfig& config);

// Log-spaced checkpoints, 10 per decade, deduplicated, always ending at K.
std::vector<std::int64_t> default_checkpoints(std::int64_t horizon);
std::vector<std::int64_t> effective_checkpoints(const ExperimentConfig&);

// Per-step closed-loop trajectory of one trial plus invariant bookkeeping.
struct TrialRecord {
    std::vector<double> u, y, s_bar, theta1, theta2, err_sq, track_sq, y_star;
    std::vector<int> level;
    std::vector<std::uint8_t> guard_flag; // guard clipped for this step's u

    std::optional<std::int64_t> diverged_at; // step index, if any
    std::int64_t step_bound_violations = 0;
    std::int64_t membership_violations = 0;
    std::int64_t identity_violations = 0;
    std::int64_t input_bound_violations = 0;
    std::int64_t guard_activations = 0;
    bool input_bound_checked = false;

    std::int64_t steps() const {
        return static_cast<std::int64_t>(u.size());
    }
};

// Deterministic given (config.master_seed, trial_index).
TrialRecord run_trial(const ExperimentConfig& config,
                      std::uint64_t trial_index);

// Windowed minimum-eigenvalue trace of the regressor outer-product sums:
// lambda[k-1] = lambda_min(sum_{i=k+2}^{k+h+1} phi(i) phi(i)') for
// k = 1 .. steps-h-1, pointwise-min across records. persistent_from is the
// first k after which the trace stays above `bound` through the horizon
// (-1 when it never does).
struct ExcitationTrace {
    std::vector<double> lambda;
    std::int64_t persistent_from = -1;
    double infimum = 0.0; // min of the trace from persistent_from on
};

ExcitationTrace empirical_excitation_trace(std::span<const TrialRecord>,
                                           int h, double bound);

struct SlopeFit {
    double slope = 0.0;
    double std_err = 0.0;
};

// Least-squares slope of log(value) against log(k).
SlopeFit fit_loglog_slope(std::span<const std::int64_t> ks,
                          std::span<const double> values);

struct MonteCarloSummary {
    std::vector<std::int64_t> checkpoints;
    std::vector<double> mse, mse_se;     // mean ||theta_hat - theta||^2
    std::vector<double> track, track_se; // mean (y - y*)^2
    double tail_tracking_mean = 0.0;     // mean over k in [K/2, K]
    double tail_tracking_se = 0.0;
    double slope = 0.0; // log-log fit over the later half of checkpoints
    double slope_se = 0.0;

    double delta_y_hat = 0.0;         // measured reference excitation
    std::int64_t empirical_k0 = -1;   // positivity onset of the trace
    double excitation_infimum = 0.0;
    ProblemConstants constants;

    std::int64_t trials_total = 0;
    std::int64_t trials_completed = 0;
    std::int64_t trials_diverged = 0;
    std::int64_t step_bound_violations = 0;
    std::int64_t membership_violations = 0;
    std::int64_t identity_violations = 0;
    std::int64_t input_bound_violations = 0;
    std::int64_t guard_activations = 0;
    bool input_bound_checked = false;
};

// Thrown when more than 20% of trials diverge; the run has no usable
// summary.
class TooManyDivergedTrials : public std::runtime_error {
public:
    TooManyDivergedTrials(std::int64_t diverged, std::int64_t total);
    std::int64_t diverged() const { return diverged_; }
    std::int64_t total() const { return total_; }

private:
    std::int64_t diverged_, total_;
};

// Worker count: explicit override, else the QTRACK_WORKERS environment
// variable, else hardware concurrency.
unsigned resolve_worker_count(std::optional<unsigned> override_count);

// Runs config.trials independent trials (in parallel when workers > 1) and
// aggregates. Bit-identical output for a fixed (config, master_seed)
// whatever the worker count.
MonteCarloSummary
run_montecarlo(const ExperimentConfig& config,
               std::optional<unsigned> workers_override = std::nullopt);

} // namespace qtrack
