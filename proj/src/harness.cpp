#include "qtrack/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <set>
#include <string>
#include <thread>

#include "qtrack/errors.hpp"

namespace qtrack {

namespace {

constexpr double kDivergenceLimit = 1e12;

bool diverged_value(double v) {
    return !std::isfinite(v) || std::fabs(v) > kDivergenceLimit;
}

// Relative slack for comparisons between quantities that are equal or
// ordered in exact arithmetic but computed through a handful of floating
// point operations.
constexpr double kStepBoundSlack = 1e-12;
constexpr double kIdentityTol = 1e-10;

struct TrialStats {
    std::vector<double> mse_at_cp, track_at_cp;
    double tail_mean = 0.0;
    double delta_y_hat = 0.0;
    std::int64_t excitation_k0 = -1;
    double excitation_min = std::numeric_limits<double>::infinity();
    bool diverged = false;
    std::int64_t step_bound_violations = 0;
    std::int64_t membership_violations = 0;
    std::int64_t identity_violations = 0;
    std::int64_t input_bound_violations = 0;
    std::int64_t guard_activations = 0;
    bool input_bound_checked = false;
};

// Single-record trace; the public span version reduces over these.
std::vector<double> trace_for(const TrialRecord& rec, int h) {
    std::int64_t steps = rec.steps();
    std::vector<double> lambda;
    if (steps < h + 2) return lambda;
    lambda.reserve(static_cast<std::size_t>(steps - h - 1));
    auto u_at = [&rec](std::int64_t i) { // u(i), with u(0) = 0
        return i >= 1 ? rec.u[static_cast<std::size_t>(i - 1)] : 0.0;
    };
    for (std::int64_t k = 1; k <= steps - h - 1; ++k) {
        double a = 0.0, b = 0.0, c = 0.0;
        for (std::int64_t i = k + 2; i <= k + h + 1; ++i) {
            double ui = u_at(i);
            double up = u_at(i - 1);
            a += ui * ui;
            b += ui * up;
            c += up * up;
        }
        lambda.push_back(lambda_min_2x2(a, b, c));
    }
    return lambda;
}

std::int64_t persistence_onset(const std::vector<double>& lambda,
                               double bound) {
    if (lambda.empty()) return -1;
    std::int64_t last_violation = 0;
    for (std::int64_t k = 1; k <= static_cast<std::int64_t>(lambda.size());
         ++k)
        if (!(lambda[static_cast<std::size_t>(k - 1)] > bound))
            last_violation = k;
    if (last_violation == static_cast<std::int64_t>(lambda.size())) return -1;
    return last_violation + 1;
}

} // namespace

void validate_config(const ExperimentConfig& config) {
    if (!config.theta.finite())
        throw ValidationError("InvalidTheta", "theta must be finite");
    validate_quantizer(config.quantizer);
    if (config.h <= 2)
        throw ValidationError("WindowTooShort",
                              "excitation window needs h > 2");
    if (config.horizon < 1)
        throw ValidationError("InvalidHorizon", "horizon must be >= 1");
    if (config.trials < 1)
        throw ValidationError("InvalidTrials", "trials must be >= 1");
    if (!(config.epsilon_guard >= 0.0) ||
        !std::isfinite(config.epsilon_guard))
        throw ValidationError("InvalidGuard", "epsilon_guard must be >= 0");
    if (!(config.mu >= 0.0 && config.mu < 1.0))
        throw ValidationError("InvalidMu", "mu must lie in [0, 1)");
    if (!config.checkpoints.empty()) {
        for (std::size_t i = 0; i + 1 < config.checkpoints.size(); ++i)
            if (!(config.checkpoints[i] < config.checkpoints[i + 1]))
                throw ValidationError("InvalidCheckpoints",
                                      "checkpoints must be strictly "
                                      "increasing");
        if (config.checkpoints.front() < 1 ||
            config.checkpoints.back() > config.horizon)
            throw ValidationError("InvalidCheckpoints",
                                  "checkpoints must lie in [1, horizon]");
    }
    ParamVec th0 = config.resolved_theta_hat0();
    if (!th0.finite() || !config.omega.contains(th0))
        throw ValidationError("InitialEstimateOutsideOmega",
                              "theta_hat0 must belong to omega");
}

std::vector<std::int64_t> default_checkpoints(std::int64_t horizon) {
    std::set<std::int64_t> cps;
    for (int j = 0;; ++j) {
        auto k = static_cast<std::int64_t>(
            std::llround(std::pow(10.0, j / 10.0)));
        if (k >= horizon) break;
        if (k >= 1) cps.insert(k);
    }
    cps.insert(horizon);
    return {cps.begin(), cps.end()};
}

std::vector<std::int64_t>
effective_checkpoints(const ExperimentConfig& config) {
    return config.checkpoints.empty() ? default_checkpoints(config.horizon)
                                      : config.checkpoints;
}

TrialRecord run_trial(const ExperimentConfig& config,
                      std::uint64_t trial_index) {
    const std::int64_t horizon = config.horizon;
    RealizedReference ref =
        config.reference.realize(config.master_seed, trial_index);
    TrialStream noise_stream(config.master_seed, trial_index,
                             kStreamPlantNoise);

    PlantState plant{config.theta, config.quantizer, config.noise, 0.0, 1};
    EstimatorState estimator(config.resolved_theta_hat0(), config.omega,
                             config.quantizer, config.noise);
    ControllerState controller;
    controller.epsilon_guard = config.epsilon_guard;
    controller.init(estimator.theta_hat(), ref.at(1));

    // Input bound from the parameter-set geometry, when it pins one down.
    double th_lo = config.omega.min_abs_first();
    double th_bar = config.omega.max_abs_second();
    bool check_input_bound = 0.0 < th_bar && th_bar < th_lo;
    double input_bound = check_input_bound
                             ? std::sqrt(2.0) * ref.bound() / (th_lo - th_bar)
                             : 0.0;

    double weight_spread = config.quantizer.weight_spread();

    TrialRecord rec;
    rec.input_bound_checked = check_input_bound;
    auto reserve = static_cast<std::size_t>(horizon);
    rec.u.reserve(reserve);
    rec.y.reserve(reserve);
    rec.s_bar.reserve(reserve);
    rec.theta1.reserve(reserve);
    rec.theta2.reserve(reserve);
    rec.err_sq.reserve(reserve);
    rec.track_sq.reserve(reserve);
    rec.y_star.reserve(reserve);
    rec.level.reserve(reserve);
    rec.guard_flag.reserve(reserve);

    for (std::int64_t k = 1; k <= horizon; ++k) {
        if (diverged_value(controller.u_next)) {
            rec.diverged_at = k;
            break;
        }
        ParamVec before = estimator.theta_hat();
        double u_prev_before = plant.u_prev;
        StepResult row =
            closed_loop_step(plant, estimator, controller, ref, noise_stream);

        rec.u.push_back(row.u);
        rec.y.push_back(row.y);
        rec.level.push_back(row.level);
        rec.s_bar.push_back(row.s_bar);
        rec.theta1.push_back(row.theta_hat.c1);
        rec.theta2.push_back(row.theta_hat.c2);
        rec.err_sq.push_back(row.err_sq);
        rec.track_sq.push_back(row.track_sq);
        rec.y_star.push_back(row.y_star);
        rec.guard_flag.push_back(row.guard_was_active ? 1 : 0);
        if (row.guard_was_active) ++rec.guard_activations;

        Regressor phi{row.u, u_prev_before};
        double step_norm = (row.theta_hat - before).norm();
        double step_bound =
            phi.norm() / static_cast<double>(k) * weight_spread;
        if (!(step_norm <= step_bound * (1.0 + kStepBoundSlack) + 1e-300))
            ++rec.step_bound_violations;
        if (!config.omega.contains(row.theta_hat))
            ++rec.membership_violations;
        if (!row.guard_was_active &&
            !(std::fabs(phi.dot(before) - row.y_star) <= kIdentityTol))
            ++rec.identity_violations;
        if (check_input_bound && !(phi.norm() <= input_bound))
            ++rec.input_bound_violations;

        if (diverged_value(row.y)) {
            rec.diverged_at = k;
            break;
        }
    }
    return rec;
}

ExcitationTrace empirical_excitation_trace(std::span<const TrialRecord> recs,
                                           int h, double bound) {
    ExcitationTrace out;
    if (h <= 2)
        throw ValidationError("WindowTooShort",
                              "excitation window needs h > 2");
    bool first = true;
    for (const TrialRecord& rec : recs) {
        std::vector<double> lambda = trace_for(rec, h);
        if (first) {
            out.lambda = std::move(lambda);
            first = false;
        } else {
            std::size_t n = std::min(out.lambda.size(), lambda.size());
            out.lambda.resize(n);
            for (std::size_t i = 0; i < n; ++i)
                out.lambda[i] = std::min(out.lambda[i], lambda[i]);
        }
    }
    out.persistent_from = persistence_onset(out.lambda, bound);
    double inf = std::numeric_limits<double>::infinity();
    std::size_t from = out.persistent_from > 0
                           ? static_cast<std::size_t>(out.persistent_from - 1)
                           : 0;
    for (std::size_t i = from; i < out.lambda.size(); ++i)
        inf = std::min(inf, out.lambda[i]);
    out.infimum = out.lambda.empty() ? 0.0 : inf;
    return out;
}

SlopeFit fit_loglog_slope(std::span<const std::int64_t> ks,
                          std::span<const double> values) {
    std::size_t n = std::min(ks.size(), values.size());
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(values[i] > 0.0) || ks[i] < 1) continue;
        xs.push_back(std::log(static_cast<double>(ks[i])));
        ys.push_back(std::log(values[i]));
    }
    SlopeFit fit;
    std::size_t m = xs.size();
    if (m < 2) {
        fit.slope = std::numeric_limits<double>::quiet_NaN();
        fit.std_err = std::numeric_limits<double>::quiet_NaN();
        return fit;
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(m);
    my /= static_cast<double>(m);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    fit.slope = sxy / sxx;
    if (m > 2) {
        double intercept = my - fit.slope * mx;
        double rss = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            double r = ys[i] - (intercept + fit.slope * xs[i]);
            rss += r * r;
        }
        fit.std_err = std::sqrt(rss / static_cast<double>(m - 2) / sxx);
    } else {
        fit.std_err = std::numeric_limits<double>::quiet_NaN();
    }
    return fit;
}

TooManyDivergedTrials::TooManyDivergedTrials(std::int64_t diverged,
                                             std::int64_t total)
    : std::runtime_error("trial divergence: " + std::to_string(diverged) +
                         " of " + std::to_string(total) +
                         " trials diverged (more than 20%)"),
      diverged_(diverged), total_(total) {}

unsigned resolve_worker_count(std::optional<unsigned> override_count) {
    if (override_count) return std::max(1u, *override_count);
    if (const char* env = std::getenv("QTRACK_WORKERS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

MonteCarloSummary
run_montecarlo(const ExperimentConfig& config,
               std::optional<unsigned> workers_override) {
    validate_config(config);
    const std::vector<std::int64_t> cps = effective_checkpoints(config);
    const auto total = config.trials;
    const std::int64_t horizon = config.horizon;

    std::vector<TrialStats> stats(static_cast<std::size_t>(total));

    auto run_one = [&](std::int64_t r) {
        TrialRecord rec = run_trial(config, static_cast<std::uint64_t>(r));
        TrialStats s;
        s.diverged = rec.diverged_at.has_value();
        s.step_bound_violations = rec.step_bound_violations;
        s.membership_violations = rec.membership_violations;
        s.identity_violations = rec.identity_violations;
        s.input_bound_violations = rec.input_bound_violations;
        s.guard_activations = rec.guard_activations;
        s.input_bound_checked = rec.input_bound_checked;
        if (!s.diverged) {
            s.mse_at_cp.reserve(cps.size());
            s.track_at_cp.reserve(cps.size());
            for (std::int64_t cp : cps) {
                auto i = static_cast<std::size_t>(cp - 1);
                s.mse_at_cp.push_back(rec.err_sq[i]);
                s.track_at_cp.push_back(rec.track_sq[i]);
            }
            std::int64_t tail_from = horizon / 2;
            double acc = 0.0;
            std::int64_t cnt = 0;
            for (std::int64_t k = tail_from; k <= horizon; ++k) {
                acc += rec.track_sq[static_cast<std::size_t>(k - 1)];
                ++cnt;
            }
            s.tail_mean = acc / static_cast<double>(cnt);

            std::vector<double> lambda = trace_for(rec, config.h);
            s.excitation_k0 = persistence_onset(lambda, 0.0);
            for (double v : lambda) s.excitation_min = std::min(s.excitation_min, v);
        }
        RealizedReference ref =
            config.reference.realize(config.master_seed,
                                     static_cast<std::uint64_t>(r));
        s.delta_y_hat = check_reference_excitation(ref, config.h, horizon);
        stats[static_cast<std::size_t>(r)] = std::move(s);
    };

    unsigned workers = resolve_worker_count(workers_override);
    if (workers <= 1 || total == 1) {
        for (std::int64_t r = 0; r < total; ++r) run_one(r);
    } else {
        std::atomic<std::int64_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto body = [&] {
            for (;;) {
                std::int64_t r = next.fetch_add(1);
                if (r >= total) return;
                try {
                    run_one(r);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        unsigned n = std::min<std::int64_t>(workers, total);
        pool.reserve(n);
        for (unsigned i = 0; i < n; ++i) pool.emplace_back(body);
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
    }

    // Ordered reduction by trial index.
    MonteCarloSummary sum;
    sum.checkpoints = cps;
    sum.trials_total = total;
    std::size_t ncp = cps.size();
    std::vector<double> mse_acc(ncp, 0.0), track_acc(ncp, 0.0);
    std::vector<std::vector<double>> mse_cols(ncp), track_cols(ncp);
    std::vector<double> tails;
    sum.delta_y_hat = std::numeric_limits<double>::infinity();
    sum.excitation_infimum = std::numeric_limits<double>::infinity();
    sum.empirical_k0 = 0;
    for (const TrialStats& s : stats) {
        sum.step_bound_violations += s.step_bound_violations;
        sum.membership_violations += s.membership_violations;
        sum.identity_violations += s.identity_violations;
        sum.input_bound_violations += s.input_bound_violations;
        sum.guard_activations += s.guard_activations;
        sum.input_bound_checked = s.input_bound_checked;
        sum.delta_y_hat = std::min(sum.delta_y_hat, s.delta_y_hat);
        if (s.diverged) {
            ++sum.trials_diverged;
            continue;
        }
        ++sum.trials_completed;
        for (std::size_t i = 0; i < ncp; ++i) {
            mse_acc[i] += s.mse_at_cp[i];
            track_acc[i] += s.track_at_cp[i];
            mse_cols[i].push_back(s.mse_at_cp[i]);
            track_cols[i].push_back(s.track_at_cp[i]);
        }
        tails.push_back(s.tail_mean);
        if (sum.empirical_k0 >= 0) {
            if (s.excitation_k0 < 0)
                sum.empirical_k0 = -1;
            else
                sum.empirical_k0 =
                    std::max(sum.empirical_k0, s.excitation_k0);
        }
        sum.excitation_infimum =
            std::min(sum.excitation_infimum, s.excitation_min);
    }

    if (sum.trials_diverged * 5 > total)
        throw TooManyDivergedTrials(sum.trials_diverged, total);

    auto n = static_cast<double>(sum.trials_completed);
    auto sample_se = [n](const std::vector<double>& col, double mean) {
        if (col.size() < 2) return 0.0;
        double ss = 0.0;
        for (double v : col) ss += (v - mean) * (v - mean);
        return std::sqrt(ss / (static_cast<double>(col.size()) - 1.0) / n);
    };

    sum.mse.resize(ncp);
    sum.mse_se.resize(ncp);
    sum.track.resize(ncp);
    sum.track_se.resize(ncp);
    for (std::size_t i = 0; i < ncp; ++i) {
        sum.mse[i] = mse_acc[i] / n;
        sum.track[i] = track_acc[i] / n;
        sum.mse_se[i] = sample_se(mse_cols[i], sum.mse[i]);
        sum.track_se[i] = sample_se(track_cols[i], sum.track[i]);
    }
    double tail_mean = 0.0;
    for (double t : tails) tail_mean += t;
    tail_mean /= n;
    sum.tail_tracking_mean = tail_mean;
    sum.tail_tracking_se = sample_se(tails, tail_mean);

    std::size_t fit_from = ncp / 2;
    SlopeFit fit = fit_loglog_slope(
        std::span<const std::int64_t>(cps).subspan(fit_from),
        std::span<const double>(sum.mse).subspan(fit_from));
    sum.slope = fit.slope;
    sum.slope_se = fit.std_err;

    RealizedReference ref0 = config.reference.realize(config.master_seed, 0);
    sum.constants =
        derive_constants_for(config.omega, ref0.bound(), config.h,
                             sum.delta_y_hat, config.quantizer, config.noise);
    return sum;
}

} // namespace qtrack
