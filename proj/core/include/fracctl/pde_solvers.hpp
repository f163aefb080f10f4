#pragma once

#include "fracctl/fields.hpp"
#include "fracctl/problem.hpp"
#include "fracctl/step_solver.hpp"

namespace fracctl {

// Backward Euler with the bilinear term taken implicitly:
//   M_k u^k = u^{k-1} + dt (source at level k),  M_k = I + dt A - dt diag(v^k chi_omega).
// All solvers return full trajectories u^0..u^nt. Sources are TimeFields whose
// level-0 snapshot is ignored.

/// State equation with the problem's initial datum.
TimeField solve_state(const Problem& problem, const ControlField& v,
                      const SolverOptions& options = {});
/// State equation from an arbitrary initial datum, reusing prepared steps.
TimeField solve_state(const StepSolver& steps, const Vector& initial);

/// Sourced system: M_k rho^k = rho^{k-1} + dt f^k.
TimeField solve_sourced(const Problem& problem, const ControlField& v, const TimeField& source,
                        const SolverOptions& options = {});
TimeField solve_sourced(const StepSolver& steps, const Vector& initial, const TimeField& source);

/// Shifted system with r = |v|_inf:
///   (M_k + dt r I) z^k = z^{k-1} + dt e^{-r t_k} f^k,  z^0 = rho_0.
/// The shift keeps every step an M-matrix without a step-size restriction.
TimeField solve_shifted(const Problem& problem, const ControlField& v, const TimeField& source,
                        const SolverOptions& options = {});

/// Exact transpose of the discrete forward map:
///   M_nt q^nt = terminal,  M_k q^k = q^{k+1} for k = nt-1..1.
/// Snapshot k pairs with forward level k; snapshot 0 repeats snapshot 1.
TimeField solve_adjoint(const Problem& problem, const ControlField& v, const Vector& terminal,
                        const SolverOptions& options = {});
TimeField solve_adjoint(const StepSolver& steps, const Vector& terminal);

/// Derivative of the discrete control-to-state map in direction w:
///   y^0 = 0,  M_k y^k = y^{k-1} + dt (w^k rho^k) chi_omega.
TimeField solve_linearized(const Problem& problem, const ControlField& v, const ControlField& w,
                           const TimeField& rho, const SolverOptions& options = {});
TimeField solve_linearized(const StepSolver& steps, const ControlField& w, const TimeField& rho);

/// Second derivative of the control-to-state map in directions (w, d):
///   z^0 = 0,  M_k z^k = z^{k-1} + dt (d^k y_w^k + w^k y_d^k) chi_omega.
TimeField solve_second(const Problem& problem, const ControlField& u, const ControlField& w,
                       const ControlField& d, const SolverOptions& options = {});
TimeField solve_second(const StepSolver& steps, const ControlField& w, const ControlField& d,
                       const TimeField& y_w, const TimeField& y_d);

}  // namespace fracctl
