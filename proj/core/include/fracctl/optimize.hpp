#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fracctl/control.hpp"
#include "fracctl/fields.hpp"
#include "fracctl/problem.hpp"

namespace fracctl {

struct OptimOptions {
    std::size_t max_iters = 500;
    /// Stop once |u - project(-rho q / alpha)|_{L2(omega_T)} <= kkt_tol.
    double kkt_tol = 1e-10;
    /// Armijo sufficient-decrease constant c1.
    double armijo_c1 = 1e-4;
    /// Backtracking factor.
    double backtrack = 0.5;
    /// Initial step; unset means 1 / alpha.
    std::optional<double> initial_step;
    std::size_t max_backtracks = 60;
    /// Fixed-point damping sigma in (0, 1].
    double damping = 0.5;
    /// Seed for random starts.
    std::uint64_t seed = 0;
    SolverOptions solver;

    void validate() const;
};

enum class OptimStatus { converged, max_iters, stalled, numerical_failure };

const char* to_string(OptimStatus status) noexcept;

struct OptimResult {
    ControlField u;
    TimeField rho;
    TimeField q;
    double cost = 0.0;
    double kkt = 0.0;
    std::vector<double> cost_history;
    std::vector<double> kkt_history;
    std::size_t iterations = 0;
    OptimStatus status = OptimStatus::max_iters;
    std::string message;
};

/// Projected gradient with Armijo backtracking:
///   v_{k+1} = project(v_k - sigma_k g_k),
///   accepted when J(v_{k+1}) <= J(v_k) - c1 <g_k, v_k - v_{k+1}>.
/// The start is projected onto the box first. Throws Error(step_size) when
/// dt * theta > 1/2.
OptimResult projected_gradient(const Problem& problem, const ControlField& start,
                               const OptimOptions& options = {});

/// Damped iteration of the projection formula
///   v_{k+1} = (1 - sigma) v_k + sigma project(-rho(v_k) q(v_k) / alpha).
/// Cost is recorded but need not decrease.
OptimResult fixed_point(const Problem& problem, const ControlField& start,
                        const OptimOptions& options = {});

/// Uniform random admissible control.
ControlField random_admissible(const Grid& grid, const Box& box, std::uint64_t seed);

struct MultistartReport {
    std::vector<OptimResult> runs;
    /// Pairwise L2(omega_T) distances, row-major upper triangle.
    std::vector<double> distances;
    double max_distance = 0.0;
    UniquenessCondition condition;
    bool all_converged = false;
    /// 1e-6 (M - m) |omega_T|^{1/2}
    double threshold = 0.0;
    /// Uniqueness asserted only when the smallness condition holds.
    bool asserted = false;
    bool passed = false;
};

/// Projected gradient from `starts` random admissible controls (seeded from
/// options.seed + start index); results are ordered by start index.
MultistartReport multistart_uniqueness(const Problem& problem, std::size_t starts,
                                       const OptimOptions& options = {});

/// Key = value run summary.
void write_run_summary(std::ostream& out, const OptimResult& result);
/// iteration,cost,kkt
void write_history_csv(std::ostream& out, const OptimResult& result);

}  // namespace fracctl
