// Command-line front end: analyze | hopf | normalform | simulate | sweep.
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nonlocal_hopf/commands.hpp"
#include "nonlocal_hopf/config.hpp"

int main(int argc, char** argv) {
    using namespace nlhopf;

    CLI::App app{"Hopf analysis and simulation of the nonlocal Holling-Tanner model"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::vector<std::string> overrides;

    const std::vector<std::pair<Command, const char*>> commands = {
        {Command::analyze, "Classify the regime and write a stability map over lambda"},
        {Command::hopf, "Locate mode-0 and mode-1 Hopf points and ell thresholds"},
        {Command::normalform, "Normal-form coefficients at the mode-1 Hopf points"},
        {Command::simulate, "Integrate the PDE and diagnose the long-time behavior"},
        {Command::sweep, "Repeat the Hopf/normal-form analysis over one parameter"},
    };
    for (const auto& [cmd, help] : commands) {
        CLI::App* sub = app.add_subcommand(to_string(cmd), help);
        sub->add_option("--config", config_path, "JSON configuration file")->required();
        sub->add_option("--out", out_dir, "Output directory (overrides the file's \"out\")");
        sub->add_option("--set", overrides, "Override a config value, e.g. --set params.b=1.2")
            ->allow_extra_args(false);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        ojson err = {{"error", {{"kind", "usage"}, {"message", e.what()}, {"code", exit_config}}}};
        std::cerr << dump_json(err);
        return exit_config;
    }

    Command command = Command::analyze;
    for (const auto& [cmd, help] : commands) {
        if (app.got_subcommand(to_string(cmd))) command = cmd;
    }

    try {
        RunConfig cfg = load_config(command, config_path, overrides);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        const CommandResult res = run_command(cfg);
        for (const auto& f : res.files) std::printf("%s\n", (std::filesystem::path(cfg.out_dir) / f).c_str());
        return exit_ok;
    } catch (const std::exception& e) {
        ojson err;
        const int code = error_to_exit(e, err);
        std::cerr << dump_json(err);
        return code;
    }
}
