#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fracctl_cli/commands.hpp"

namespace {

struct Flags {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> suites;
    std::string control;
};

fracctl::cli::RunConfig resolve(const Flags& flags) {
    using namespace fracctl;
    cli::RunConfig config = flags.config.empty() ? cli::RunConfig{} : cli::load_config(flags.config);
    if (!flags.out.empty()) config.output_dir = flags.out;
    if (flags.seed) {
        config.verify.seed = *flags.seed;
        config.optimizer.seed = *flags.seed;
    }
    if (!flags.control.empty()) {
        config.control = flags.control;
        config.base_dir = ".";
    }
    if (!flags.suites.empty()) {
        config.verify.suites.clear();
        for (const auto& name : flags.suites) {
            Suite suite{};
            if (!parse_suite(name, suite)) throw cli::ConfigError("unknown suite '" + name + "'");
            config.verify.suites.insert(suite);
        }
    }
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fracctl: bilinear optimal control of a fractional heat equation"};
    app.require_subcommand(1);
    Flags flags;

    auto add_common = [&flags](CLI::App* cmd) {
        cmd->add_option("--config", flags.config, "key = value configuration file");
        cmd->add_option("--out", flags.out, "output directory (overrides output.dir)");
        cmd->add_option("--seed", flags.seed, "seed for random sampling");
    };
    auto* solve = app.add_subcommand("solve", "solve the state equation for a fixed control");
    auto* adjoint = app.add_subcommand("adjoint", "solve state and adjoint equations for a fixed control");
    auto* optimize = app.add_subcommand("optimize", "minimize the tracking functional over the box");
    auto* verify = app.add_subcommand("verify", "run the verification suites");
    auto* gradcheck = app.add_subcommand("gradcheck", "compare the adjoint gradient with finite differences");
    for (auto* cmd : {solve, adjoint, optimize, verify, gradcheck}) add_common(cmd);
    for (auto* cmd : {solve, adjoint, gradcheck, optimize}) {
        cmd->add_option("--control", flags.control,
                        "control profile: zero, constant(c), bump(a), csv(path); start point for optimize");
    }
    verify->add_option("--suite", flags.suites,
                       "suite to run (repeatable): operator, maximum_principle, estimate, derivative, "
                       "lipschitz, optimality");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : fracctl::cli::exit_config;
    }

    using namespace fracctl::cli;
    return guarded(std::cerr, [&]() -> int {
        const RunConfig config = resolve(flags);
        if (*solve) return cmd_solve(config, std::cout, false);
        if (*adjoint) return cmd_solve(config, std::cout, true);
        if (*optimize) return cmd_optimize(config, std::cout);
        if (*verify) return cmd_verify(config, std::cout);
        return cmd_gradcheck(config, std::cout);
    });
}
