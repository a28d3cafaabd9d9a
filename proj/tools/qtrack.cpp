#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qtrack/cli.hpp"
#include "qtrack/config.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Adaptive tracking control under multi-threshold quantized "
                 "observations: simulation and verification toolkit"};
    app.set_version_flag("--version", qtrack::kToolVersion);
    app.require_subcommand(1);

    qtrack::cli::SimulateOptions sim;
    qtrack::cli::MonteCarloOptions mc;
    qtrack::cli::CheckOptions chk;

    auto add_common = [](CLI::App* cmd, qtrack::cli::CommonOptions& opt) {
        cmd->add_option("config", opt.config_path, "experiment config (JSON)")
            ->required();
        cmd->add_option("--seed", opt.seed, "override master_seed");
        cmd->add_option("--horizon", opt.horizon, "override horizon K");
        cmd->add_option("--quantizer-preset", opt.quantizer_preset,
                        "use a named quantizer preset (e.g. 'paper')");
    };

    CLI::App* c_sim =
        app.add_subcommand("simulate", "run one closed-loop trial");
    add_common(c_sim, sim);
    c_sim->add_option("-o,--out", sim.out_dir, "output directory")
        ->required();
    c_sim->add_option("--trial", sim.trial_index, "trial index (default 0)");

    CLI::App* c_mc =
        app.add_subcommand("montecarlo", "run the Monte Carlo experiment");
    add_common(c_mc, mc);
    c_mc->add_option("-o,--out", mc.out_dir, "output directory")->required();
    c_mc->add_option("--trials", mc.trials, "override trial count R");
    c_mc->add_option("--synthetic-power", mc.synthetic_power,
                     "skip simulation; fit the synthetic curve k^-p");

    CLI::App* c_chk = app.add_subcommand(
        "check", "validate assumptions and print derived constants");
    add_common(c_chk, chk);

    CLI11_PARSE(app, argc, argv);

    if (c_sim->parsed())
        return qtrack::cli::cmd_simulate(sim, std::cout, std::cerr);
    if (c_mc->parsed())
        return qtrack::cli::cmd_montecarlo(mc, std::cout, std::cerr);
    return qtrack::cli::cmd_check(chk, std::cout, std::cerr);
}
