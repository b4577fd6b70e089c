// Experiment runner: every library surface as a reproducible subcommand with
// file-based configuration, CSV outputs, and a checksummed run manifest.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "berglab/commands.hpp"
#include "berglab/config.hpp"
#include "berglab/version.hpp"

namespace {

struct CliOverrides {
    std::string config_path;
    std::string out_dir;
    std::vector<int> m_list;
    int nodes = -1;
    int degree = -1;
    std::string lift;
    std::int64_t seed = -1;
};

berglab::RunConfig build_config(const CliOverrides& cli) {
    berglab::RunConfig cfg;
    if (!cli.config_path.empty()) cfg = berglab::parse_config_file(cli.config_path);
    if (!cli.out_dir.empty()) cfg.out_dir = cli.out_dir;
    if (!cli.m_list.empty()) cfg.m_list = cli.m_list;
    if (cli.nodes >= 0) cfg.nodes = cli.nodes;
    if (cli.degree >= 0) cfg.degree = cli.degree;
    if (!cli.lift.empty()) cfg.lift = berglab::Rational::parse(cli.lift);
    if (cli.seed >= 0) cfg.seed = static_cast<std::uint64_t>(cli.seed);
    for (int m : cfg.m_list)
        if (m < 1) throw berglab::config_error("powers must be positive");
    return cfg;
}

void add_common_flags(CLI::App* cmd, CliOverrides& cli) {
    cmd->add_option("--config", cli.config_path, "run configuration file (key = value)");
    cmd->add_option("--out", cli.out_dir, "output directory");
    cmd->add_option("--m", cli.m_list, "section power, repeatable; overrides the config list");
    cmd->add_option("--nodes", cli.nodes, "quadrature node count override");
    cmd->add_option("--degree", cli.degree, "Legendre degree cap");
    cmd->add_option("--lift", cli.lift, "lift constant as a rational, e.g. 1/2");
    cmd->add_option("--seed", cli.seed, "seed for the random-potential checks");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"berglab: Bergman densities, characters, and approximate critical metrics "
                 "on the invariant sphere"};
    app.set_version_flag("--version", std::string(berglab::kVersion));
    app.require_subcommand(1);

    CliOverrides cli;
    int (*run)(const berglab::RunConfig&) = nullptr;

    auto* density = app.add_subcommand("density", "Bergman density and gram diagonals per power");
    add_common_flags(density, cli);
    density->callback([&] { run = &berglab::cmd_density; });

    auto* fit = app.add_subcommand("fit", "expansion coefficients and the a1 = sigma/2 check");
    add_common_flags(fit, cli);
    fit->callback([&] { run = &berglab::cmd_fit; });

    auto* obstruction =
        app.add_subcommand("obstruction", "character integrals and lift identities");
    add_common_flags(obstruction, cli);
    obstruction->callback([&] { run = &berglab::cmd_obstruction; });

    auto* correct = app.add_subcommand("correct", "corrector iteration with order trace");
    add_common_flags(correct, cli);
    correct->callback([&] { run = &berglab::cmd_correct; });

    auto* check = app.add_subcommand("check", "full invariant battery");
    add_common_flags(check, cli);
    check->callback([&] { run = &berglab::cmd_check; });

    CLI11_PARSE(app, argc, argv);

    try {
        const berglab::RunConfig cfg = build_config(cli);
        return run(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return berglab::kExitError;
    }
}
