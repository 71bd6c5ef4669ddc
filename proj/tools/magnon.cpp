// magnon - plot-data generator for magnon-polariton mediated spin-defect coupling

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

#include "magnon/commands.hpp"
#include "magnon/config.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Magnon-polariton spin-defect calculator: writes CSV tables with an embedded config header"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_dir;
    unsigned workers = 0;
    app.add_option("--config", config_path, "YAML config, or a CSV previously written by this tool")
        ->required()
        ->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory (overrides output.directory)");
    app.add_option("--workers", workers, "worker threads, 0 = all cores (overrides run.workers)");

    const std::map<std::string, std::string> help{
        {"permeability", "mu_x over the spectrum axis"},
        {"dispersion", "single-interface and slab mode wave vectors"},
        {"dispersion-map", "k-resolved spin-flip density over energy and wave vector"},
        {"rates", "spin-flip and exchange rate spectra"},
        {"sweep", "rates over the sweep grid"},
        {"dynamics", "non-Markovian amplitudes and concurrence"},
    };
    for (const auto& name : magnon::command_names()) app.add_subcommand(name, help.at(name));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : magnon::exit_config;
    }

    magnon::RunConfig config;
    try {
        config = magnon::load_config(config_path);
    } catch (const magnon::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return magnon::exit_config;
    }
    if (!out_dir.empty()) config.output_dir = out_dir;
    if (app.count("--workers")) config.workers = workers;

    return magnon::execute(app.get_subcommands().front()->get_name(), config, std::cerr);
}
