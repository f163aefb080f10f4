#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "fracctl_cli/config.hpp"

namespace fracctl::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_check_failed = 1,
    exit_config = 2,
    exit_stability = 3,
    exit_not_converged = 4,
    exit_internal = 5,
};

int cmd_solve(const RunConfig& config, std::ostream& log, bool with_adjoint = false);
int cmd_optimize(const RunConfig& config, std::ostream& log);
int cmd_verify(const RunConfig& config, std::ostream& log);
int cmd_gradcheck(const RunConfig& config, std::ostream& log);

/// Runs `body` and maps library and config exceptions to exit codes.
template <class Body>
int guarded(std::ostream& err, Body&& body);

int exit_code_for(const std::exception& error, std::ostream& err);

template <class Body>
int guarded(std::ostream& err, Body&& body) {
    try {
        return body();
    } catch (const std::exception& error) {
        return exit_code_for(error, err);
    }
}

}  // namespace fracctl::cli
