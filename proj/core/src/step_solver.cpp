#include "fracctl/step_solver.hpp"

#include <cmath>
#include <sstream>

#include "fracctl/error.hpp"

namespace fracctl {

StepSolver::StepSolver(const Problem& problem, const ControlField& v, double shift,
                       const SolverOptions& options)
    : problem_(&problem), control_(v), shift_(shift), options_(options) {
    const Grid& grid = problem.grid();
    require(v.rows() == static_cast<Eigen::Index>(grid.window_size()) &&
                v.cols() == static_cast<Eigen::Index>(grid.nt()),
            ErrorKind::dimension_mismatch, "step solver: control shape does not match grid");
    require(v.all_finite(), ErrorKind::invalid_argument, "step solver: control not finite");
    require(shift >= 0.0 && std::isfinite(shift), ErrorKind::invalid_argument,
            "step solver: shift must be non-negative");

    const double excess = std::max(0.0, v.sup_norm() - shift);
    if (grid.dt() * excess > kStepSizeLimit) {
        std::ostringstream msg;
        msg << "step size: dt * |v|_inf = " << grid.dt() * excess << " exceeds "
            << kStepSizeLimit;
        fail(ErrorKind::step_size, msg.str());
    }

    time_constant_ = v.time_constant();
    if (options_.linear_solver != LinearSolver::cholesky) return;

    const std::size_t count = time_constant_ ? 1 : grid.nt();
    factors_.reserve(count);
    for (std::size_t k = 1; k <= count; ++k) {
        factors_.emplace_back(matrix(k));
        require(factors_.back().info() == Eigen::Success, ErrorKind::internal,
                "step solver: Cholesky factorization failed");
    }
}

Vector StepSolver::diagonal_shift(std::size_t level) const {
    // 1 + dt shift - dt v chi_omega
    const Grid& grid = problem_->grid();
    const double dt = grid.dt();
    Vector diag = Vector::Constant(static_cast<Eigen::Index>(grid.n()), 1.0 + dt * shift_);
    const auto& nodes = grid.window_nodes();
    const auto col = static_cast<Eigen::Index>(level) - 1;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        diag[static_cast<Eigen::Index>(nodes[j])] -=
            dt * control_.values()(static_cast<Eigen::Index>(j), col);
    }
    return diag;
}

Matrix StepSolver::matrix(std::size_t level) const {
    require(level >= 1 && level <= grid().nt(), ErrorKind::invalid_argument,
            "step solver: level out of range");
    Matrix m = grid().dt() * problem_->op().dense();
    m.diagonal() += diagonal_shift(level);
    return m;
}

Vector StepSolver::multiply(std::size_t level, const Vector& x) const {
    require(level >= 1 && level <= grid().nt(), ErrorKind::invalid_argument,
            "step solver: level out of range");
    return grid().dt() * problem_->op().apply_toeplitz(x) +
           diagonal_shift(level).cwiseProduct(x);
}

Vector StepSolver::solve(std::size_t level, const Vector& rhs) const {
    require(level >= 1 && level <= grid().nt(), ErrorKind::invalid_argument,
            "step solver: level out of range");
    require(rhs.size() == static_cast<Eigen::Index>(grid().n()), ErrorKind::dimension_mismatch,
            "step solver: right-hand side length does not match grid");
    if (options_.linear_solver == LinearSolver::toeplitz_cg) return solve_cg(level, rhs);
    const auto& factor = factors_[time_constant_ ? 0 : level - 1];
    return factor.solve(rhs);
}

Vector StepSolver::solve_cg(std::size_t level, const Vector& rhs) const {
    const Grid& grid = problem_->grid();
    const double dt = grid.dt();
    const Vector diag =
        diagonal_shift(level).array() + dt * problem_->op().entry(0, 0);
    const Vector inv_diag = diag.cwiseInverse();
    const std::size_t max_iter =
        options_.cg_max_iterations > 0 ? options_.cg_max_iterations : 10 * grid.n();

    Vector x = rhs.cwiseProduct(inv_diag);
    Vector r = rhs - multiply(level, x);
    const double target = options_.cg_tolerance * rhs.norm();
    if (r.norm() <= target) return x;
    Vector z = r.cwiseProduct(inv_diag);
    Vector p = z;
    double rz = r.dot(z);
    for (std::size_t it = 0; it < max_iter; ++it) {
        const Vector q = multiply(level, p);
        const double step = rz / p.dot(q);
        x += step * p;
        r -= step * q;
        if (r.norm() <= target) return x;
        z = r.cwiseProduct(inv_diag);
        const double rz_next = r.dot(z);
        p = z + (rz_next / rz) * p;
        rz = rz_next;
    }
    fail(ErrorKind::numerical, "step solver: conjugate gradients did not converge");
}

}  // namespace fracctl
