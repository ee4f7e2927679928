#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "lorentz_lab/errors.hpp"

namespace cli = lorentz_lab::cli;

int main(int argc, char** argv) {
    CLI::App app{"Lorentz-space Hardy and maximal operator constants, oracles and sandbox checks"};
    app.require_subcommand(1);

    std::string config;
    std::string out = ".";
    std::optional<unsigned> threads;
    std::optional<std::uint64_t> seed;
    for (const auto& name : cli::command_names()) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config, "JSON configuration")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out, "output directory");
        sub->add_option("--threads", threads, "worker threads");
        sub->add_option("--seed", seed, "random seed, overrides the config");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return cli::kExitUsage;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        const auto loaded = cli::load(config, seed, threads, out);
        return cli::run_command(command, loaded, std::cout);
    } catch (const cli::config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
    } catch (const lorentz_lab::configuration_error& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return cli::kExitValidation;
}
