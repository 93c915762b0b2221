#include "sperner/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

int main(int argc, char** argv) {
    using namespace sperner::cli;

    CLI::App app{"Antichains, LYM sums and anti-concentration under product measures"};
    app.set_version_flag("--version", "sperner_lab 0.1.0");

    RunConfig config;
    std::string command;
    std::string output = "json";
    std::string family;
    long long trials = -1;
    int level = -1;

    app.add_option("command", command,
                   "levels | chain-sample | verify | lym | sperner | maxantichain | bound | "
                   "mc-check | enumerate")
        ->required()
        ->check(CLI::IsMember({"levels", "chain-sample", "verify", "lym", "sperner",
                               "maxantichain", "bound", "mc-check", "enumerate"}));
    app.add_option("--measure", config.measure_path, "measure JSON file {\"p\": [...]}");
    app.add_option("--family", family, "family JSON file {\"n\": N, \"members\": [\"0x..\"]}");
    app.add_option("--seed", config.seed, "64-bit seed (default 0)");
    app.add_option("--trials", trials, "chains to sample (chain-sample, mc-check)")->check(CLI::NonNegativeNumber);
    app.add_option("--output", output, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--precision", config.precision, "significant digits for reals")
        ->check(CLI::Range(1, 17));
    app.add_option("--level", level, "level for mc-check (default n/2)")->check(CLI::NonNegativeNumber);
    app.add_option("--n", config.max_n, "largest universe for enumerate")->check(CLI::Range(0, 5));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsageError;
    }

    config.command = *parse_command(command);
    config.output = output == "csv" ? OutputFormat::csv : OutputFormat::json;
    if (!family.empty()) config.family_path = family;
    if (trials >= 0) config.trials = trials;
    if (level >= 0) config.level = level;
    if ((config.command == Command::lym || config.command == Command::sperner) && !config.family_path) {
        std::cerr << "error: --family is required for " << command << '\n';
        return kUsageError;
    }
    return run(config, std::cout, std::cerr);
}
