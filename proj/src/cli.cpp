#include "qtrack/cli.hpp"

#include <cmath>
#include <filesystem>
#include <iomanip>
#include <limits>
#include <sstream>

#include "qtrack/config.hpp"
#include "qtrack/csv.hpp"
#include "qtrack/errors.hpp"
#include "qtrack/harness.hpp"

namespace qtrack::cli {

namespace fs = std::filesystem;

namespace {

struct Loaded {
    ExperimentConfig config;
    std::string checksum;
};

Loaded load_and_override(const CommonOptions& opt,
                         const std::optional<std::int64_t>& trials = {}) {
    LoadedConfig lc = load_config_file(opt.config_path);
    if (opt.quantizer_preset)
        lc.config.quantizer = quantizer_preset(*opt.quantizer_preset);
    if (opt.seed) lc.config.master_seed = *opt.seed;
    if (opt.horizon) {
        lc.config.horizon = *opt.horizon;
        // user-supplied checkpoints may now point past the horizon
        std::erase_if(lc.config.checkpoints, [&](std::int64_t k) {
            return k > lc.config.horizon;
        });
    }
    if (trials) lc.config.trials = *trials;
    validate_config(lc.config);
    return {std::move(lc.config), std::move(lc.checksum)};
}

int report_error(const std::exception& e, std::ostream& err, int code) {
    err << "error: " << e.what() << "\n";
    return code;
}

// Ill-posed setups run anyway (the division guard keeps them finite), but
// deserve a note up front.
void warn_if_ill_posed(const ExperimentConfig& cfg, std::ostream& err) {
    if (cfg.omega.lo1() <= 0.0 && 0.0 <= cfg.omega.hi1())
        err << "warning: parameter set contains theta(1)=0; the division "
               "guard may engage\n";
    if (!(min_phase_margin(cfg.theta) > cfg.mu))
        err << "warning: theta has minimum-phase margin "
            << format_double(min_phase_margin(cfg.theta))
            << " <= mu; tracking is not guaranteed\n";
}

std::string trial_csv(const TrialRecord& rec) {
    std::string s = "k,u,y,S,S_bar,theta1_hat,theta2_hat,err_sq,track_sq\n";
    for (std::int64_t k = 1; k <= rec.steps(); ++k) {
        auto i = static_cast<std::size_t>(k - 1);
        s += format_int(k);
        s += ',';
        s += format_double(rec.u[i]);
        s += ',';
        s += format_double(rec.y[i]);
        s += ',';
        s += format_int(rec.level[i]);
        s += ',';
        s += format_double(rec.s_bar[i]);
        s += ',';
        s += format_double(rec.theta1[i]);
        s += ',';
        s += format_double(rec.theta2[i]);
        s += ',';
        s += format_double(rec.err_sq[i]);
        s += ',';
        s += format_double(rec.track_sq[i]);
        s += '\n';
    }
    return s;
}

std::string mse_curve_csv(const MonteCarloSummary& sum) {
    std::string s = "k,mse,mse_se,k_times_mse\n";
    for (std::size_t i = 0; i < sum.checkpoints.size(); ++i) {
        s += format_int(sum.checkpoints[i]);
        s += ',';
        s += format_double(sum.mse[i]);
        s += ',';
        s += format_double(sum.mse_se[i]);
        s += ',';
        s += format_double(static_cast<double>(sum.checkpoints[i]) *
                           sum.mse[i]);
        s += '\n';
    }
    return s;
}

std::string tracking_curve_csv(const MonteCarloSummary& sum) {
    std::string s = "k,track,track_se\n";
    for (std::size_t i = 0; i < sum.checkpoints.size(); ++i) {
        s += format_int(sum.checkpoints[i]);
        s += ',';
        s += format_double(sum.track[i]);
        s += ',';
        s += format_double(sum.track_se[i]);
        s += '\n';
    }
    return s;
}

std::string summary_csv(const MonteCarloSummary& sum) {
    std::string s = "slope,slope_se,tail_tracking_mean,tail_tracking_se,"
                    "rate_class,zeta,empirical_K0,delta_y_hat\n";
    s += format_double(sum.slope);
    s += ',';
    s += format_double(sum.slope_se);
    s += ',';
    s += format_double(sum.tail_tracking_mean);
    s += ',';
    s += format_double(sum.tail_tracking_se);
    s += ',';
    s += sum.constants.rate_class
             ? rate_class_name(*sum.constants.rate_class)
             : "not_certified";
    s += ',';
    s += format_double(sum.constants.rate_exponent.value_or(
        std::numeric_limits<double>::quiet_NaN()));
    s += ',';
    s += format_int(sum.empirical_k0);
    s += ',';
    s += format_double(sum.delta_y_hat);
    s += '\n';
    return s;
}

} // namespace

int cmd_simulate(const SimulateOptions& opt, std::ostream& out,
                 std::ostream& err) {
    Loaded loaded;
    try {
        loaded = load_and_override(opt);
    } catch (const ConfigError& e) {
        return report_error(e, err, kExitConfigError);
    } catch (const ValidationError& e) {
        return report_error(e, err, kExitValidation);
    }

    warn_if_ill_posed(loaded.config, err);

    try {
        fs::create_directories(opt.out_dir);
        write_run_manifest(opt.out_dir, loaded.checksum,
                           loaded.config.master_seed, {"trial.csv"});
        TrialRecord rec = run_trial(loaded.config, opt.trial_index);
        write_text_atomic(fs::path(opt.out_dir) / "trial.csv",
                          trial_csv(rec));
        if (rec.diverged_at) {
            err << "error: trial " << opt.trial_index
                << " diverged at step " << *rec.diverged_at << "\n";
            return kExitDiverged;
        }
        out << "wrote " << (fs::path(opt.out_dir) / "trial.csv").string()
            << " (" << rec.steps() << " steps)\n";
        if (rec.guard_activations > 0)
            out << "note: division guard engaged on "
                << rec.guard_activations << " steps\n";
        return kExitOk;
    } catch (const ValidationError& e) {
        return report_error(e, err, kExitValidation);
    } catch (const ConfigError& e) {
        return report_error(e, err, kExitConfigError);
    }
}

int cmd_montecarlo(const MonteCarloOptions& opt, std::ostream& out,
                   std::ostream& err) {
    Loaded loaded;
    try {
        loaded = load_and_override(opt, opt.trials);
    } catch (const ConfigError& e) {
        return report_error(e, err, kExitConfigError);
    } catch (const ValidationError& e) {
        return report_error(e, err, kExitValidation);
    }
    const ExperimentConfig& cfg = loaded.config;
    warn_if_ill_posed(cfg, err);

    try {
        fs::create_directories(opt.out_dir);
        write_run_manifest(
            opt.out_dir, loaded.checksum, cfg.master_seed,
            {"mse_curve.csv", "tracking_curve.csv", "summary.csv"});

        MonteCarloSummary sum;
        if (opt.synthetic_power) {
            // Curve-injection mode: exercises the fitting and reporting
            // path with mse(k) = k^-p instead of running trials.
            double p = *opt.synthetic_power;
            sum.checkpoints = effective_checkpoints(cfg);
            for (std::int64_t k : sum.checkpoints) {
                sum.mse.push_back(std::pow(static_cast<double>(k), -p));
                sum.mse_se.push_back(0.0);
                sum.track.push_back(1.0);
                sum.track_se.push_back(0.0);
            }
            sum.tail_tracking_mean = 1.0;
            std::size_t from = sum.checkpoints.size() / 2;
            SlopeFit fit = fit_loglog_slope(
                std::span<const std::int64_t>(sum.checkpoints).subspan(from),
                std::span<const double>(sum.mse).subspan(from));
            sum.slope = fit.slope;
            sum.slope_se = fit.std_err;
            RealizedReference ref0 =
                cfg.reference.realize(cfg.master_seed, 0);
            sum.delta_y_hat =
                check_reference_excitation(ref0, cfg.h, cfg.horizon);
            sum.constants =
                derive_constants_for(cfg.omega, ref0.bound(), cfg.h,
                                     sum.delta_y_hat, cfg.quantizer,
                                     cfg.noise);
            sum.empirical_k0 = -1;
        } else {
            sum = run_montecarlo(cfg, opt.workers);
        }

        write_text_atomic(fs::path(opt.out_dir) / "mse_curve.csv",
                          mse_curve_csv(sum));
        write_text_atomic(fs::path(opt.out_dir) / "tracking_curve.csv",
                          tracking_curve_csv(sum));
        write_text_atomic(fs::path(opt.out_dir) / "summary.csv",
                          summary_csv(sum));

        out << "trials " << sum.trials_completed << "/" << sum.trials_total
            << " completed";
        if (sum.trials_diverged > 0)
            out << " (" << sum.trials_diverged << " diverged)";
        out << "\n";
        if (!opt.synthetic_power) {
            out << "slope " << format_double(sum.slope) << ", tail tracking "
                << format_double(sum.tail_tracking_mean) << " (se "
                << format_double(sum.tail_tracking_se) << ")\n";
            out << "excitation: infimum "
                << format_double(sum.excitation_infimum)
                << ", positive from window " << sum.empirical_k0
                << ", analysis delta "
                << format_double(sum.constants.excitation_delta) << "\n";
            std::int64_t violations =
                sum.step_bound_violations + sum.membership_violations +
                sum.identity_violations + sum.input_bound_violations;
            if (violations > 0)
                err << "warning: " << violations
                    << " invariant violations recorded\n";
        }
        return kExitOk;
    } catch (const TooManyDivergedTrials& e) {
        return report_error(e, err, kExitTooDiverged);
    } catch (const ValidationError& e) {
        return report_error(e, err, kExitValidation);
    } catch (const ConfigError& e) {
        return report_error(e, err, kExitConfigError);
    }
}

namespace {

void print_row(std::ostream& out, const std::string& name,
               const std::string& status, const std::string& detail) {
    out << "  " << std::left << std::setw(26) << name << std::setw(18)
        << status << detail << "\n";
}

std::string opt_str(const std::optional<double>& v) {
    return v ? format_double(*v) : "n/a";
}

} // namespace

int cmd_check(const CheckOptions& opt, std::ostream& out, std::ostream& err) {
    Loaded loaded;
    try {
        loaded = load_and_override(opt);
    } catch (const ConfigError& e) {
        return report_error(e, err, kExitConfigError);
    } catch (const ValidationError& e) {
        return report_error(e, err, kExitValidation);
    }
    const ExperimentConfig& cfg = loaded.config;

    try {
        RealizedReference ref = cfg.reference.realize(cfg.master_seed, 0);
        double delta_y_hat =
            check_reference_excitation(ref, cfg.h, cfg.horizon);
        ProblemConstants pc =
            derive_constants_for(cfg.omega, ref.bound(), cfg.h, delta_y_hat,
                                 cfg.quantizer, cfg.noise);
        double margin = min_phase_margin(cfg.theta);

        out << "assumption checks (" << opt.config_path << ")\n";
        print_row(out, "A1 reference bound", "pass",
                  "y_bar = " + format_double(ref.bound()));
        print_row(out, "A2 reference excitation",
                  delta_y_hat > 0.0 ? "pass" : "fail",
                  "delta_y_hat = " + format_double(delta_y_hat) +
                      " (h = " + std::to_string(cfg.h) +
                      ", horizon = " + std::to_string(cfg.horizon) + ")");
        print_row(out, "A3 minimum phase", margin > cfg.mu ? "pass" : "fail",
                  "margin = " + format_double(margin) +
                      " vs mu = " + format_double(cfg.mu));

        std::string omega_status = "pass";
        std::string omega_detail;
        if (!cfg.omega.contains(cfg.theta)) {
            omega_status = "fail";
            omega_detail = "theta outside omega";
        } else if (cfg.omega.lo1() <= 0.0 && 0.0 <= cfg.omega.hi1()) {
            omega_status = "fail";
            omega_detail = "violates Assumption 4 (contains theta(1)=0)";
        } else if (!(cfg.omega.min_abs_first() - cfg.omega.max_abs_second() >
                     cfg.mu)) {
            omega_status = "fail";
            omega_detail =
                "violates Assumption 4 (contains points with margin <= mu)";
        } else {
            omega_detail =
                "theta_lower = " + opt_str(pc.theta_lower) +
                ", theta_bar = " + opt_str(pc.theta_bar) +
                ", M_bar = " + format_double(pc.m_bar);
        }
        print_row(out, "A4 parameter set", omega_status, omega_detail);

        print_row(out, "A5 noise model", "pass",
                  "zero mean by construction, variance = " +
                      format_double(cfg.noise.variance()));

        if (pc.certified) {
            bool pos = *pc.density_floor_value > 0.0;
            print_row(out, "A6 density floor", pos ? "pass" : "fail",
                      "f_star = " + opt_str(pc.density_floor_value) +
                          " on [-D1, D1], D1 = " + opt_str(pc.density_range));
        } else {
            print_row(out, "A6 density floor", "not-certifiable",
                      "needs a parameter set with 0 < theta_bar < "
                      "theta_lower");
        }

        out << "constants\n";
        print_row(out, "M_bar", "", format_double(pc.m_bar));
        print_row(out, "delta", "", format_double(pc.excitation_delta));
        print_row(out, "M", "", opt_str(pc.input_bound));
        print_row(out, "D1", "", opt_str(pc.density_range));
        print_row(out, "f_star", "", opt_str(pc.density_floor_value));
        print_row(out, "zeta", "", opt_str(pc.rate_exponent));
        print_row(out, "rate_class", "",
                  pc.rate_class ? rate_class_name(*pc.rate_class)
                                : "not_certified");
        return kExitOk;
    } catch (const ValidationError& e) {
        return report_error(e, err, kExitValidation);
    }
}

} // namespace qtrack::cli
