#include "fracctl/pde_solvers.hpp"

#include <cmath>

#include "fracctl/error.hpp"

namespace fracctl {
namespace {

void check_trajectory(const Grid& grid, const TimeField& field, const char* what) {
    if (field.size() != grid.n() || field.levels() != grid.nt()) {
        fail(ErrorKind::dimension_mismatch, std::string(what) + ": shape does not match grid");
    }
}

void check_direction(const Grid& grid, const ControlField& w, const char* what) {
    if (w.rows() != static_cast<Eigen::Index>(grid.window_size()) ||
        w.cols() != static_cast<Eigen::Index>(grid.nt())) {
        fail(ErrorKind::dimension_mismatch, std::string(what) + ": shape does not match grid");
    }
}

void check_finite(const TimeField& field, const char* what) {
    if (!field.all_finite()) {
        fail(ErrorKind::internal, std::string(what) + ": solver produced non-finite values");
    }
}

}  // namespace

TimeField solve_state(const StepSolver& steps, const Vector& initial) {
    const Grid& grid = steps.grid();
    require(initial.size() == static_cast<Eigen::Index>(grid.n()), ErrorKind::dimension_mismatch,
            "solve_state: initial datum length does not match grid");
    TimeField rho(grid.n(), grid.nt());
    rho[0] = initial;
    for (std::size_t k = 1; k <= grid.nt(); ++k) rho[k] = steps.solve(k, rho[k - 1]);
    check_finite(rho, "solve_state");
    return rho;
}

TimeField solve_state(const Problem& problem, const ControlField& v, const SolverOptions& options) {
    const StepSolver steps(problem, v, 0.0, options);
    return solve_state(steps, problem.rho0());
}

TimeField solve_sourced(const StepSolver& steps, const Vector& initial, const TimeField& source) {
    const Grid& grid = steps.grid();
    check_trajectory(grid, source, "solve_sourced source");
    require(initial.size() == static_cast<Eigen::Index>(grid.n()), ErrorKind::dimension_mismatch,
            "solve_sourced: initial datum length does not match grid");
    const double dt = grid.dt();
    TimeField rho(grid.n(), grid.nt());
    rho[0] = initial;
    for (std::size_t k = 1; k <= grid.nt(); ++k) {
        rho[k] = steps.solve(k, rho[k - 1] + dt * source[k]);
    }
    check_finite(rho, "solve_sourced");
    return rho;
}

TimeField solve_sourced(const Problem& problem, const ControlField& v, const TimeField& source,
                        const SolverOptions& options) {
    const StepSolver steps(problem, v, 0.0, options);
    return solve_sourced(steps, problem.rho0(), source);
}

TimeField solve_shifted(const Problem& problem, const ControlField& v, const TimeField& source,
                        const SolverOptions& options) {
    const Grid& grid = problem.grid();
    check_trajectory(grid, source, "solve_shifted source");
    const double r = v.sup_norm();
    const StepSolver steps(problem, v, r, options);
    const double dt = grid.dt();
    TimeField z(grid.n(), grid.nt());
    z[0] = problem.rho0();
    for (std::size_t k = 1; k <= grid.nt(); ++k) {
        const double damping = std::exp(-r * grid.time(k));
        z[k] = steps.solve(k, z[k - 1] + dt * (damping * source[k]));
    }
    check_finite(z, "solve_shifted");
    return z;
}

TimeField solve_adjoint(const StepSolver& steps, const Vector& terminal) {
    const Grid& grid = steps.grid();
    require(terminal.size() == static_cast<Eigen::Index>(grid.n()),
            ErrorKind::dimension_mismatch, "solve_adjoint: terminal datum length does not match");
    const std::size_t nt = grid.nt();
    TimeField q(grid.n(), nt);
    q[nt] = steps.solve(nt, terminal);
    for (std::size_t k = nt - 1; k >= 1; --k) q[k] = steps.solve(k, q[k + 1]);
    q[0] = q[1];
    check_finite(q, "solve_adjoint");
    return q;
}

TimeField solve_adjoint(const Problem& problem, const ControlField& v, const Vector& terminal,
                        const SolverOptions& options) {
    const StepSolver steps(problem, v, 0.0, options);
    return solve_adjoint(steps, terminal);
}

TimeField solve_linearized(const StepSolver& steps, const ControlField& w, const TimeField& rho) {
    const Grid& grid = steps.grid();
    check_direction(grid, w, "solve_linearized direction");
    check_trajectory(grid, rho, "solve_linearized state");
    const double dt = grid.dt();
    TimeField y(grid.n(), grid.nt());
    for (std::size_t k = 1; k <= grid.nt(); ++k) {
        y[k] = steps.solve(k, y[k - 1] + dt * window_product(grid, w, k, rho[k]));
    }
    check_finite(y, "solve_linearized");
    return y;
}

TimeField solve_linearized(const Problem& problem, const ControlField& v, const ControlField& w,
                           const TimeField& rho, const SolverOptions& options) {
    const StepSolver steps(problem, v, 0.0, options);
    return solve_linearized(steps, w, rho);
}

TimeField solve_second(const StepSolver& steps, const ControlField& w, const ControlField& d,
                       const TimeField& y_w, const TimeField& y_d) {
    const Grid& grid = steps.grid();
    check_direction(grid, w, "solve_second direction");
    check_direction(grid, d, "solve_second direction");
    check_trajectory(grid, y_w, "solve_second sensitivity");
    check_trajectory(grid, y_d, "solve_second sensitivity");
    const double dt = grid.dt();
    TimeField z(grid.n(), grid.nt());
    for (std::size_t k = 1; k <= grid.nt(); ++k) {
        // Addition commutes bit-for-bit, so swapping (w, d) gives identical output.
        const Vector source = window_product(grid, d, k, y_w[k]) + window_product(grid, w, k, y_d[k]);
        z[k] = steps.solve(k, z[k - 1] + dt * source);
    }
    check_finite(z, "solve_second");
    return z;
}

TimeField solve_second(const Problem& problem, const ControlField& u, const ControlField& w,
                       const ControlField& d, const SolverOptions& options) {
    const StepSolver steps(problem, u, 0.0, options);
    const TimeField rho = solve_state(steps, problem.rho0());
    const TimeField y_w = solve_linearized(steps, w, rho);
    const TimeField y_d = solve_linearized(steps, d, rho);
    return solve_second(steps, w, d, y_w, y_d);
}

}  // namespace fracctl
