#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Cholesky>

#include "fracctl/fields.hpp"
#include "fracctl/problem.hpp"

namespace fracctl {

enum class LinearSolver {
    /// Dense Cholesky per time level, cached across levels when v is constant in time.
    cholesky,
    /// Matrix-free Toeplitz products with Jacobi-preconditioned conjugate gradients.
    toeplitz_cg,
};

struct SolverOptions {
    LinearSolver linear_solver = LinearSolver::cholesky;
    /// Relative residual target for the CG path.
    double cg_tolerance = 1e-13;
    /// Iteration cap for the CG path; 0 means 10 n.
    std::size_t cg_max_iterations = 0;
};

/// Step matrices M_k = I + dt (A + shift I) - dt diag(v^k chi_omega), k = 1..nt.
///
/// Under dt (|v|_inf - shift)_+ <= 1/2 each M_k is a symmetric positive
/// definite M-matrix with row sums >= 1 - dt (|v|_inf - shift). Factorizations
/// are built once at construction; the object is immutable afterwards.
class StepSolver {
public:
    StepSolver(const Problem& problem, const ControlField& v, double shift = 0.0,
               const SolverOptions& options = {});

    const Problem& problem() const { return *problem_; }
    const Grid& grid() const { return problem_->grid(); }
    const ControlField& control() const { return control_; }
    double shift() const { return shift_; }
    bool time_constant() const { return time_constant_; }

    /// Solves M_level x = rhs, level in 1..nt.
    Vector solve(std::size_t level, const Vector& rhs) const;
    /// M_level x
    Vector multiply(std::size_t level, const Vector& x) const;
    /// Dense M_level, for inspection and tests.
    Matrix matrix(std::size_t level) const;

private:
    Vector diagonal_shift(std::size_t level) const;
    Vector solve_cg(std::size_t level, const Vector& rhs) const;

    const Problem* problem_;
    ControlField control_;
    double shift_;
    SolverOptions options_;
    bool time_constant_;
    std::vector<Eigen::LLT<Matrix>> factors_;
};

}  // namespace fracctl
