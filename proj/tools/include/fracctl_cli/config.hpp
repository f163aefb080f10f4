#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracctl/optimize.hpp"
#include "fracctl/problem.hpp"
#include "fracctl/verify.hpp"

namespace fracctl::cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Method { projected_gradient, fixed_point };

/// Everything a command needs. Defaults reproduce the benchmark instance.
struct RunConfig {
    double a = -1.0;
    double b = 1.0;
    std::size_t n = 127;
    double s = 0.5;
    double T = 0.5;
    std::size_t nt = 200;
    double omega_a = -0.5;
    double omega_b = 0.5;
    double alpha = 1.0;
    double m = -1.0;
    double M = 1.0;
    std::string rho0 = "bump(0.1)";
    std::string rhod = "bump(0.05)";

    Method method = Method::projected_gradient;
    OptimOptions optimizer;
    VerifyConfig verify;

    std::string control = "zero";
    std::string output_dir = "fracctl_out";

    // Relative csv(...) paths resolve against this directory.
    std::filesystem::path base_dir = ".";
};

RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = ".");
RunConfig load_config(const std::filesystem::path& path);
void write_config(std::ostream& out, const RunConfig& config);

/// Writes rho0/rhod as CSV files under `data_dir` and returns a config that
/// reproduces `spec` exactly when rebuilt.
RunConfig config_from_spec(const ProblemSpec& spec, const std::filesystem::path& data_dir);

Grid build_grid(const RunConfig& config);
ProblemSpec build_problem(const RunConfig& config);
ControlField build_control(const std::string& profile, const Grid& grid,
                           const std::filesystem::path& base_dir);

struct ProfileCall {
    std::string name;
    std::vector<std::string> args;
};

ProfileCall parse_profile(const std::string& text);

}  // namespace fracctl::cli
