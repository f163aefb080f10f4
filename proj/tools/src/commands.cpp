#include "fracctl_cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>

#include "fracctl/control.hpp"
#include "fracctl/error.hpp"
#include "fracctl/io.hpp"
#include "fracctl/norms.hpp"
#include "fracctl/pde_solvers.hpp"

namespace fracctl::cli {
namespace {

std::filesystem::path prepare_output(const RunConfig& config) {
    const std::filesystem::path dir(config.output_dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    return out;
}

void write_problem_summary(std::ostream& out, const ProblemSpec& spec) {
    const Grid& g = spec.grid;
    out << "n = " << g.n() << '\n'
        << "nt = " << g.nt() << '\n'
        << "dx = " << format_double(g.dx()) << '\n'
        << "dt = " << format_double(g.dt()) << '\n'
        << "s = " << format_double(spec.s) << '\n'
        << "alpha = " << format_double(spec.alpha) << '\n'
        << "theta = " << format_double(spec.theta()) << '\n'
        << "window_nodes = " << g.window_size() << '\n';
}

}  // namespace

int exit_code_for(const std::exception& error, std::ostream& err) {
    if (dynamic_cast<const ConfigError*>(&error) != nullptr) {
        err << "config error: " << error.what() << '\n';
        return exit_config;
    }
    if (const auto* lib = dynamic_cast<const Error*>(&error)) {
        switch (lib->kind()) {
            case ErrorKind::step_size:
                err << "stability error: " << lib->what() << '\n';
                return exit_stability;
            case ErrorKind::invalid_argument:
            case ErrorKind::invalid_order:
            case ErrorKind::dimension_mismatch:
                err << "config error: " << lib->what() << '\n';
                return exit_config;
            case ErrorKind::numerical:
            case ErrorKind::internal:
                break;
        }
    }
    err << "internal error: " << error.what() << '\n';
    return exit_internal;
}

int cmd_solve(const RunConfig& config, std::ostream& log, bool with_adjoint) {
    const Problem problem(build_problem(config));
    const Grid& grid = problem.grid();
    const ControlField v = build_control(config.control, grid, config.base_dir);
    const StepSolver steps(problem, v, 0.0, config.optimizer.solver);
    const TimeField rho = solve_state(steps, problem.rho0());

    const auto dir = prepare_output(config);
    {
        auto out = open_output(dir / "state.csv");
        write_trajectory_csv(out, grid, rho);
    }

    const std::size_t nt = grid.nt();
    const double r = v.sup_norm();
    const double rho0_inf = linf_norm(problem.rho0());
    const double bound = std::pow(1.0 - grid.dt() * r, -static_cast<double>(nt)) * rho0_inf;
    const double state_inf = linf_norm(rho);
    const Vector mismatch = rho[nt] - problem.rhod();
    const double tracking = l2_norm(grid.dx(), mismatch);

    auto summary = open_output(dir / "summary.txt");
    summary << "command = " << (with_adjoint ? "adjoint" : "solve") << '\n';
    write_problem_summary(summary, problem.spec());
    summary << "control_sup = " << format_double(r) << '\n'
            << "terminal_l2 = " << format_double(l2_norm(grid.dx(), rho[nt])) << '\n'
            << "terminal_tracking_l2 = " << format_double(tracking) << '\n'
            << "state_linf = " << format_double(state_inf) << '\n'
            << "state_min = " << format_double(rho.min_value()) << '\n'
            << "state_linf_bound = " << format_double(bound) << '\n'
            << "state_linf_bound_margin = " << format_double(bound - state_inf) << '\n'
            << "cost = "
            << format_double(0.5 * tracking * tracking + 0.5 * problem.alpha() * std::pow(l2_norm(grid, v), 2))
            << '\n';
    if (with_adjoint) {
        const TimeField q = solve_adjoint(steps, mismatch);
        auto out = open_output(dir / "adjoint.csv");
        write_trajectory_csv(out, grid, q);
        const double adjoint_bound = std::exp(r * grid.horizon()) * (linf_norm(rho[nt]) + linf_norm(problem.rhod()));
        summary << "adjoint_linf = " << format_double(linf_norm(q)) << '\n'
                << "adjoint_linf_bound = " << format_double(adjoint_bound) << '\n'
                << "adjoint_linf_bound_margin = " << format_double(adjoint_bound - linf_norm(q)) << '\n';
    }
    log << "wrote " << (dir / "state.csv").string() << (with_adjoint ? ", adjoint.csv" : "") << " and summary.txt\n";
    return exit_ok;
}

int cmd_optimize(const RunConfig& config, std::ostream& log) {
    const Problem problem(build_problem(config));
    problem.check_step_size();
    const Grid& grid = problem.grid();
    const ControlField start = build_control(config.control, grid, config.base_dir);
    const OptimResult result = config.method == Method::projected_gradient
                                   ? projected_gradient(problem, start, config.optimizer)
                                   : fixed_point(problem, start, config.optimizer);

    const auto dir = prepare_output(config);
    {
        auto out = open_output(dir / "control.csv");
        write_control_csv(out, grid, result.u);
    }
    {
        auto out = open_output(dir / "state.csv");
        write_trajectory_csv(out, grid, result.rho);
    }
    {
        auto out = open_output(dir / "adjoint.csv");
        write_trajectory_csv(out, grid, result.q);
    }
    {
        auto out = open_output(dir / "history.csv");
        write_history_csv(out, result);
    }
    const KKTReport kkt = kkt_residual(problem, result.u, config.optimizer.solver);
    {
        auto out = open_output(dir / "kkt_masks.csv");
        write_kkt_masks_csv(out, grid, kkt);
    }

    const UniquenessCondition unique = uniqueness_condition(problem.spec());
    const SmallnessCondition small = ssc_smallness(problem.spec(), config.verify.domain_constant);
    auto summary = open_output(dir / "summary.txt");
    summary << "command = optimize\n"
            << "method = " << (config.method == Method::projected_gradient ? "projected_gradient" : "fixed_point")
            << '\n';
    write_problem_summary(summary, problem.spec());
    write_run_summary(summary, result);
    summary << "control_l2 = " << format_double(l2_norm(grid, result.u)) << '\n'
            << "lower_active = " << kkt.lower_active.count() << '\n'
            << "upper_active = " << kkt.upper_active.count() << '\n'
            << "inactive = " << kkt.inactive.count() << '\n'
            << "sign_violations = " << kkt.violations << '\n'
            << "uniqueness_condition_lhs = " << format_double(unique.lhs) << '\n'
            << "uniqueness_condition_margin = " << format_double(unique.margin) << '\n'
            << "uniqueness_condition_holds = " << (unique.holds ? "true" : "false") << '\n'
            << "smallness_condition_constant = " << format_double(config.verify.domain_constant) << '\n'
            << "smallness_condition_lhs = " << format_double(small.lhs) << '\n'
            << "smallness_condition_rhs = " << format_double(small.rhs) << '\n'
            << "smallness_condition_holds = " << (small.holds ? "true" : "false") << '\n';

    log << "optimize: " << to_string(result.status) << " after " << result.iterations
        << " iterations, J = " << format_double(result.cost) << ", kkt = " << format_double(result.kkt) << '\n';
    return result.status == OptimStatus::converged ? exit_ok : exit_not_converged;
}

int cmd_verify(const RunConfig& config, std::ostream& log) {
    const bool needs_problem = config.verify.suites.count(Suite::optimality) != 0;
    VerifyReport report;
    if (needs_problem) {
        const Problem problem(build_problem(config));
        problem.check_step_size();
        report = run_verify(config.verify, problem, config.optimizer);
    } else {
        // Every suite except optimality builds its own instances.
        const Problem unused(benchmark_spec(7, 4));
        report = run_verify(config.verify, unused, config.optimizer);
    }
    const auto dir = prepare_output(config);
    {
        auto out = open_output(dir / "report.txt");
        write_report_text(out, report);
    }
    {
        auto out = open_output(dir / "report.csv");
        write_report_csv(out, report);
    }
    write_report_text(log, report);
    return report.passed() ? exit_ok : exit_check_failed;
}

int cmd_gradcheck(const RunConfig& config, std::ostream& log) {
    const Problem problem(build_problem(config));
    const Grid& grid = problem.grid();
    const ControlField v = build_control(config.control, grid, config.base_dir);
    const ControlPoint point(problem, v, ControlPoint::Depth::gradient, config.optimizer.solver);

    std::mt19937_64 rng(config.verify.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    ControlField w(grid);
    for (Eigen::Index c = 0; c < w.cols(); ++c) {
        for (Eigen::Index r = 0; r < w.rows(); ++r) w.values()(r, c) = normal(rng);
    }
    const double exact = point.derivative(w);

    const auto dir = prepare_output(config);
    auto table = open_output(dir / "gradcheck.csv");
    table << "eps,finite_difference,adjoint,relative_error\n";
    double best = std::numeric_limits<double>::infinity();
    for (int e = 1; e <= 10; ++e) {
        const double eps = std::pow(10.0, -e);
        const double fd = (cost(problem, v + eps * w, config.optimizer.solver) -
                           cost(problem, v - eps * w, config.optimizer.solver)) /
                          (2.0 * eps);
        const double scale = std::max(std::abs(fd), std::abs(exact));
        const double rel = scale > 0.0 ? std::abs(fd - exact) / scale : 0.0;
        best = std::min(best, rel);
        table << format_double(eps) << ',' << format_double(fd) << ',' << format_double(exact) << ','
              << format_double(rel) << '\n';
    }
    auto summary = open_output(dir / "summary.txt");
    summary << "command = gradcheck\n";
    write_problem_summary(summary, problem.spec());
    summary << "directional_derivative = " << format_double(exact) << '\n'
            << "best_relative_error = " << format_double(best) << '\n'
            << "passed = " << (best <= 1e-6 ? "true" : "false") << '\n';
    log << "gradcheck: best relative error " << format_double(best) << '\n';
    return best <= 1e-6 ? exit_ok : exit_check_failed;
}

}  // namespace fracctl::cli
