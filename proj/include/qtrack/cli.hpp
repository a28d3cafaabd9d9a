#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace qtrack::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;   // unreadable / unparseable
inline constexpr int kExitValidation = 3;    // named invariant violated
inline constexpr int kExitDiverged = 4;      // single-trial divergence
inline constexpr int kExitTooDiverged = 5;   // >20% of trials diverged

struct CommonOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> horizon;
    std::optional<std::string> quantizer_preset;
};

struct SimulateOptions : CommonOptions {
    std::string out_dir;
    std::uint64_t trial_index = 0;
};

struct MonteCarloOptions : CommonOptions {
    std::string out_dir;
    std::optional<std::int64_t> trials;
    std::optional<double> synthetic_power; // bypass simulation, test fitter
    std::optional<unsigned> workers;       // tests only; normally env var
};

struct CheckOptions : CommonOptions {};

// Runs one trial and writes trial.csv (+ run_manifest.json) to out_dir.
int cmd_simulate(const SimulateOptions&, std::ostream& out,
                 std::ostream& err);

// Runs the Monte Carlo experiment and writes mse_curve.csv,
// tracking_curve.csv, summary.csv (+ run_manifest.json) to out_dir.
int cmd_montecarlo(const MonteCarloOptions&, std::ostream& out,
                   std::ostream& err);

// Prints the assumption/constants report for a config.
int cmd_check(const CheckOptions&, std::ostream& out, std::ostream& err);

} // namespace qtrack::cli
