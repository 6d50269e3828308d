#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "fockfisher/cli_io.hpp"

using namespace fockfisher;

namespace {

struct Overrides {
    std::string config;
    std::map<std::string, std::string> values;
};

void add_keys(CLI::App* cmd, Overrides& ov) {
    cmd->add_option("--config", ov.config, "flat key = value file, applied before other flags");
    for (const std::string& key : option_keys())
        cmd->add_option("--" + key, ov.values[key]);
    cmd->add_option("--N", ov.values["N"], "alias of --photons");
}

RunOptions resolve(CLI::App* cmd, const Overrides& ov) {
    RunOptions o;
    if (!ov.config.empty())
        load_config_file(o, ov.config);
    for (const auto& [key, value] : ov.values)
        if (cmd->count("--" + key) > 0)
            apply_option(o, key, value);
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-parameter (phase, diffusion) Fisher analysis of gHB probe states"};
    app.set_version_flag("--version", kEngineVersion);
    app.require_subcommand(1);

    Overrides single_ov, sweep_ov, validate_ov;
    CLI::App* single = app.add_subcommand("single", "evaluate one scenario");
    CLI::App* sweep = app.add_subcommand("sweep", "write sweep tables and a manifest");
    CLI::App* validate = app.add_subcommand("validate", "run the fast invariant checks");
    add_keys(single, single_ov);
    add_keys(sweep, sweep_ov);
    add_keys(validate, validate_ov);

    CLI11_PARSE(app, argc, argv);

    try {
        if (single->parsed()) {
            RunOptions o = resolve(single, single_ov);
            if (o.states.empty())
                o.states.push_back(StateSpec::ghb(0, 6));
            if (o.deltas.empty())
                o.deltas.push_back(5.0);
            return cmd_single(o, std::cout);
        }
        if (sweep->parsed()) {
            const RunOptions o = resolve(sweep, sweep_ov);
            for (const std::string& f : cmd_sweep(o))
                std::cout << (o.out / f).string() << "\n";
            return 0;
        }
        return cmd_validate(resolve(validate, validate_ov), std::cout);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
