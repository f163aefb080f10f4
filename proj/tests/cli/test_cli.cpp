#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "fracctl/io.hpp"
#include "fracctl/verify.hpp"
#include "fracctl_cli/commands.hpp"
#include "fracctl_cli/config.hpp"

using namespace fracctl;
using namespace fracctl::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    const fs::path dir = fs::temp_directory_path() / "fracctl_cli_tests" / info->name();
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::map<std::string, std::string> read_summary(const fs::path& path) {
    std::map<std::string, std::string> out;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find(" = ");
        if (eq != std::string::npos) out[line.substr(0, eq)] = line.substr(eq + 3);
    }
    return out;
}

double summary_value(const std::map<std::string, std::string>& summary, const std::string& key) {
    double v = 0.0;
    EXPECT_TRUE(parse_double(summary.at(key), v)) << key;
    return v;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

int run_binary(const std::string& args, const fs::path& log) {
    const std::string command = std::string(FRACCTL_BINARY) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

RunConfig parse_text(const std::string& text, const fs::path& base = ".") {
    std::istringstream in(text);
    return parse_config(in, base);
}

}  // namespace

TEST(Config, DefaultsAreTheBenchmark) {
    const ProblemSpec spec = build_problem(RunConfig{});
    const ProblemSpec bench = benchmark_spec();
    EXPECT_TRUE(spec.grid == bench.grid);
    EXPECT_EQ(spec.rho0, bench.rho0);
    EXPECT_EQ(spec.rhod, bench.rhod);
    EXPECT_EQ(spec.s, bench.s);
    EXPECT_EQ(spec.alpha, bench.alpha);
    EXPECT_TRUE(spec.box == bench.box);
}

TEST(Config, UnknownKeyIsNamed) {
    try {
        parse_text("problem.n = 31\nproblem.alpha_ = 2\n");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("problem.alpha_"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }
}

TEST(Config, MalformedValuesRejected) {
    EXPECT_THROW(parse_text("problem.n = 3.5\n"), ConfigError);
    EXPECT_THROW(parse_text("problem.s = abc\n"), ConfigError);
    EXPECT_THROW(parse_text("problem.omega = -0.5, 0.5\n"), ConfigError);
    EXPECT_THROW(parse_text("problem.n = 31\nproblem.n = 31\n"), ConfigError);
    EXPECT_THROW(parse_text("just text\n"), ConfigError);
    EXPECT_THROW(parse_text("verify.suites = operator,bogus\n"), ConfigError);
    EXPECT_THROW(parse_text("optimizer.backtrack = 2\n"), ConfigError);
    EXPECT_THROW(build_problem(parse_text("problem.s = 1.5\n")), ConfigError);
    EXPECT_THROW(build_problem(parse_text("problem.rho0 = wave(1)\n")), ConfigError);
}

TEST(Config, CommentsAndWhitespace) {
    const RunConfig c = parse_text("# header\n\n  problem.n=31   # trailing\nproblem.omega = [ -0.25 , 0.75 ]\n");
    EXPECT_EQ(c.n, 31u);
    EXPECT_EQ(c.omega_a, -0.25);
    EXPECT_EQ(c.omega_b, 0.75);
}

TEST(Config, TextRoundTrip) {
    RunConfig c = parse_text(
        "problem.n = 33\nproblem.s = 0.3\nproblem.alpha = 0.123456789012345678\n"
        "problem.rho0 = eigen(2, 0.5)\noptimizer.method = fixed_point\noptimizer.initial_step = 0.25\n"
        "verify.suites = estimate,operator\nverify.ssc_tau = 1e-7\n");
    std::ostringstream text;
    write_config(text, c);
    const RunConfig back = parse_text(text.str());
    std::ostringstream again;
    write_config(again, back);
    EXPECT_EQ(text.str(), again.str());
    EXPECT_EQ(back.alpha, c.alpha);
    EXPECT_EQ(back.verify.suites, c.verify.suites);
}

TEST(Config, ProblemSpecRoundTripFieldForField) {
    const fs::path dir = scratch_dir();
    ProblemSpec spec = benchmark_spec(21, 30);
    spec.s = 0.37;
    spec.alpha = 0.1 + 1e-17;
    spec.rho0 = Vector::LinSpaced(21, 0.0, 1.0).array().sqrt() / 3.0;
    const RunConfig c = config_from_spec(spec, dir);
    {
        std::ofstream out(dir / "run.conf");
        write_config(out, c);
    }
    const ProblemSpec back = build_problem(load_config(dir / "run.conf"));
    EXPECT_TRUE(back.grid == spec.grid);
    EXPECT_EQ(back.s, spec.s);
    EXPECT_EQ(back.alpha, spec.alpha);
    EXPECT_TRUE(back.box == spec.box);
    EXPECT_EQ(back.rho0, spec.rho0);
    EXPECT_EQ(back.rhod, spec.rhod);
    EXPECT_EQ(back.dimension, spec.dimension);
}

TEST(Config, ProfilesEvaluate) {
    RunConfig c = parse_text("problem.n = 3\nproblem.rho0 = bump(2)\nproblem.rhod = constant(-0.5)\n"
                             "problem.omega = [-0.9, 0.9]\n");
    const ProblemSpec spec = build_problem(c);
    EXPECT_DOUBLE_EQ(spec.rho0[1], 2.0);
    EXPECT_DOUBLE_EQ(spec.rho0[0], 2.0 * 0.75);
    EXPECT_EQ(spec.rhod, Vector::Constant(3, -0.5));
    const ControlField v = build_control("constant(0.25)", spec.grid, ".");
    EXPECT_EQ(v.sup_norm(), 0.25);
    EXPECT_THROW(build_control("constant()", spec.grid, "."), ConfigError);
    EXPECT_THROW(build_control("csv(/nonexistent/file.csv)", spec.grid, "."), ConfigError);
}

TEST(Commands, ZeroDataSolveWritesZeros) {
    const fs::path dir = scratch_dir();
    RunConfig c = parse_text("problem.n = 15\nproblem.nt = 20\nproblem.rho0 = zero\nproblem.rhod = bump(0.2)\n");
    c.output_dir = dir.string();
    std::ostringstream log;
    ASSERT_EQ(cmd_solve(c, log), exit_ok);
    const auto s = read_summary(dir / "summary.txt");
    EXPECT_EQ(summary_value(s, "state_linf"), 0.0);
    const ProblemSpec spec = build_problem(c);
    EXPECT_NEAR(summary_value(s, "terminal_tracking_l2"), std::sqrt(spec.grid.dx()) * spec.rhod.norm(), 1e-15);
    std::ifstream csv(dir / "state.csv");
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line, "t,x,value");
    while (std::getline(csv, line)) EXPECT_EQ(line.substr(line.rfind(',') + 1), "0");
}

TEST(Commands, EigenInstanceMatchesClosedForm) {
    const fs::path dir = scratch_dir();
    RunConfig c = parse_text("problem.n = 15\nproblem.nt = 40\nproblem.T = 0.5\nproblem.rho0 = eigen(1)\n");
    c.output_dir = dir.string();
    std::ostringstream log;
    ASSERT_EQ(cmd_solve(c, log), exit_ok);
    const auto s = read_summary(dir / "summary.txt");
    const ProblemSpec spec = build_problem(c);
    const double lambda = 1.1906006749416285;  // numpy reference
    const double expected = std::pow(1.0 + spec.grid.dt() * lambda, -40.0) * std::sqrt(spec.grid.dx()) * spec.rho0.norm();
    EXPECT_NEAR(summary_value(s, "terminal_l2"), expected, 1e-12);
}

TEST(Commands, AdjointWritesSecondTrajectory) {
    const fs::path dir = scratch_dir();
    RunConfig c = parse_text("problem.n = 15\nproblem.nt = 20\ncontrol.v = constant(0.5)\n");
    c.output_dir = dir.string();
    std::ostringstream log;
    ASSERT_EQ(cmd_solve(c, log, true), exit_ok);
    EXPECT_TRUE(fs::exists(dir / "adjoint.csv"));
    const auto s = read_summary(dir / "summary.txt");
    EXPECT_GE(summary_value(s, "adjoint_linf_bound_margin"), 0.0);
    EXPECT_GE(summary_value(s, "state_linf_bound_margin"), 0.0);
}

TEST(Commands, OptimizeZeroDataGivesZeroControl) {
    const fs::path dir = scratch_dir();
    RunConfig c = parse_text("problem.n = 15\nproblem.nt = 20\nproblem.rho0 = zero\n");
    c.output_dir = dir.string();
    std::ostringstream log;
    ASSERT_EQ(cmd_optimize(c, log), exit_ok);
    const auto s = read_summary(dir / "summary.txt");
    EXPECT_LE(summary_value(s, "control_l2"), 1e-12);
    EXPECT_EQ(s.at("status"), "converged");
    EXPECT_TRUE(fs::exists(dir / "history.csv"));
    EXPECT_TRUE(fs::exists(dir / "kkt_masks.csv"));
}

TEST(Commands, VerifySubsetIsDeterministic) {
    const fs::path dir = scratch_dir();
    RunConfig c;
    c.verify.suites = {Suite::operator_, Suite::derivative};
    c.verify.derivative_cases = 3;
    c.output_dir = (dir / "a").string();
    std::ostringstream log_a, log_b;
    ASSERT_EQ(cmd_verify(c, log_a), exit_ok);
    c.output_dir = (dir / "b").string();
    ASSERT_EQ(cmd_verify(c, log_b), exit_ok);
    EXPECT_EQ(slurp(dir / "a" / "report.txt"), slurp(dir / "b" / "report.txt"));
    EXPECT_EQ(slurp(dir / "a" / "report.csv"), slurp(dir / "b" / "report.csv"));
    EXPECT_EQ(log_a.str().find("maximum principle"), std::string::npos);
}

TEST(Binary, ExitCodes) {
    const fs::path dir = scratch_dir();
    {
        std::ofstream bad(dir / "bad.conf");
        bad << "problem.alpha_ = 2\n";
    }
    EXPECT_EQ(run_binary("solve --config " + (dir / "bad.conf").string(), dir / "bad.log"), 2);
    EXPECT_NE(slurp(dir / "bad.log").find("alpha_"), std::string::npos);

    {
        std::ofstream small(dir / "small.conf");
        small << "problem.n = 15\nproblem.nt = 20\n";
    }
    const std::string base = "--config " + (dir / "small.conf").string() + " --out " + (dir / "out").string();
    EXPECT_EQ(run_binary("solve " + base + " --control 'constant(0.5)'", dir / "ok.log"), 0);
    EXPECT_EQ(run_binary("solve " + base + " --control 'constant(100)'", dir / "unstable.log"), 3);
    EXPECT_EQ(run_binary("gradcheck " + base + " --control 'bump(0.5)'", dir / "grad.log"), 0);
    {
        std::ofstream budget(dir / "budget.conf");
        budget << "optimizer.max_iters = 1\noptimizer.kkt_tol = 1e-15\n";
    }
    EXPECT_EQ(run_binary("optimize --config " + (dir / "budget.conf").string() + " --out " + (dir / "budget").string(),
                         dir / "budget.log"),
              4);
    EXPECT_TRUE(fs::exists(dir / "budget" / "history.csv"));
    EXPECT_EQ(run_binary("verify --suite nonsense", dir / "suite.log"), 2);
    EXPECT_EQ(run_binary("frobnicate", dir / "cmd.log"), 2);
}

TEST(Binary, VerifySeedIsByteDeterministic) {
    const fs::path dir = scratch_dir();
    const std::string common = " --suite operator --suite derivative --seed 11 --out ";
    EXPECT_EQ(run_binary("verify" + common + (dir / "a").string(), dir / "a.log"), 0);
    EXPECT_EQ(run_binary("verify" + common + (dir / "b").string(), dir / "b.log"), 0);
    EXPECT_EQ(slurp(dir / "a" / "report.txt"), slurp(dir / "b" / "report.txt"));
    EXPECT_EQ(slurp(dir / "a.log"), slurp(dir / "b.log"));
}
