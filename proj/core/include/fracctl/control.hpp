#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>

#include "fracctl/fields.hpp"
#include "fracctl/problem.hpp"
#include "fracctl/step_solver.hpp"

namespace fracctl {

/// State (and optionally adjoint) of the discrete problem at a fixed control.
///
/// Step factorizations are shared by the state, adjoint, sensitivity and
/// second-order solves, so derivative evaluations at one control cost only
/// triangular solves. The referenced Problem must outlive this object.
class ControlPoint {
public:
    enum class Depth { cost, gradient };

    ControlPoint(const Problem& problem, ControlField v, Depth depth = Depth::gradient,
                 const SolverOptions& options = {});

    const Problem& problem() const { return *problem_; }
    const ControlField& control() const { return control_; }
    const StepSolver& steps() const { return steps_; }
    const TimeField& state() const { return state_; }
    /// Throws unless constructed with Depth::gradient.
    const TimeField& adjoint() const;

    double cost() const { return tracking_ + regularization_; }
    /// 1/2 |rho^nt - rho_d|^2_{L2}
    double tracking() const { return tracking_; }
    /// alpha/2 |v|^2_{L2(omega_T)}
    double regularization() const { return regularization_; }

    /// L2(omega_T) Riesz representative g = alpha v + rho q on window nodes.
    const ControlField& gradient() const;
    /// J'(v) w = <g, w>
    double derivative(const ControlField& w) const;
    /// -rho q / alpha on window nodes: the argument of the projection formula.
    ControlField projection_argument() const;

    /// Sensitivity G'(v) w.
    TimeField sensitivity(const ControlField& w) const;
    /// J''(v)[w, d].
    double hessian(const ControlField& w, const ControlField& d) const;
    /// J''(v)[w, d] from precomputed sensitivities.
    double hessian(const ControlField& w, const ControlField& d, const TimeField& y_w,
                   const TimeField& y_d) const;

private:
    const Problem* problem_;
    ControlField control_;
    StepSolver steps_;
    TimeField state_;
    double tracking_ = 0.0;
    double regularization_ = 0.0;
    std::optional<TimeField> adjoint_;
    std::optional<ControlField> gradient_;
};

struct GradientResult {
    ControlField gradient;
    TimeField state;
    TimeField adjoint;
    double cost = 0.0;
};

double cost(const Problem& problem, const ControlField& v, const SolverOptions& options = {});
GradientResult gradient(const Problem& problem, const ControlField& v,
                        const SolverOptions& options = {});
double hessian_bilinear(const Problem& problem, const ControlField& u, const ControlField& w,
                        const ControlField& d, const SolverOptions& options = {});

/// Pointwise clip onto [m, M].
ControlField project(const Box& box, const ControlField& raw);

/// Relative threshold below which |g| counts as zero in the three-way
/// classification of a KKT point.
inline constexpr double kTieTolerance = 1e-10;
/// Relative distance to a bound (in units of M - m) that counts as "on the bound".
inline constexpr double kBoxTolerance = 1e-9;

struct KKTReport {
    ControlField gradient;
    /// |u - project(-rho q / alpha)|_{L2(omega_T)}
    double residual = 0.0;
    double gradient_sup = 0.0;
    /// g > 0 and u = m
    ControlMask lower_active;
    /// g < 0 and u = M
    ControlMask upper_active;
    /// |g| <= tie tolerance
    ControlMask inactive;
    /// Entries fitting none of the three cases (zero at an exact KKT point).
    Eigen::Index violations = 0;
};

KKTReport kkt_residual(const ControlPoint& point);
KKTReport kkt_residual(const Problem& problem, const ControlField& u,
                       const SolverOptions& options = {});

/// Strongly active set: true exactly where |g| > tau.
/// Numerical zero for the gradient: kTieTolerance times the larger of
/// |g|_inf and alpha * theta. Coercivity sampling never cuts below it.
double tie_threshold(const Problem& problem, const ControlField& gradient);

ControlMask active_set(const ControlField& gradient, double tau);
ControlMask active_set(const Problem& problem, const ControlField& u, double tau,
                       const SolverOptions& options = {});

/// Pointwise L2 projection of v onto the tau-critical cone of u: zero on the
/// strongly active set, max(v, 0) where u = m, min(v, 0) where u = M, v elsewhere.
ControlField critical_cone_project(const Box& box, const ControlField& u,
                                   const ControlField& gradient, double tau,
                                   const ControlField& v);
ControlField critical_cone_project(const Problem& problem, const ControlField& u, double tau,
                                   const ControlField& v, const SolverOptions& options = {});

struct UniquenessCondition {
    bool holds = false;
    double lhs = 0.0;
    double margin = 0.0;
};

/// lhs = 3 e^{3 theta T} (|rho_0|_inf^2 + |rho_d|_inf^2); holds iff lhs < alpha.
UniquenessCondition uniqueness_condition(const ProblemSpec& spec);

struct SmallnessCondition {
    bool holds = false;
    double lhs = 0.0;
    double rhs = 0.0;
};

/// lhs = (6 + C theta) e^{2 theta T} (|rho_0|_inf + |rho_d|_inf) |rho_0|_inf,
/// holds iff lhs <= alpha / 2. The domain constant C is not known in closed
/// form and is supplied by the caller.
SmallnessCondition ssc_smallness(const ProblemSpec& spec, double domain_constant);

struct CoercivityReport {
    enum class Status { ok, inconclusive };

    Status status = Status::inconclusive;
    std::size_t samples_used = 0;
    /// min over samples of J''(u) v^2 / |v|^2
    double min_ratio = 0.0;
    double alpha = 0.0;
    /// min_ratio >= alpha / 2
    bool sufficient = false;
    /// min_ratio >= -1e-8 alpha
    bool necessary = false;
};

/// Samples Gaussian directions, projects them into the tau-critical cone and
/// records the smallest Rayleigh quotient of the Hessian.
CoercivityReport check_coercivity(const ControlPoint& point, double tau, std::size_t samples,
                                  std::uint64_t seed);
CoercivityReport check_coercivity(const Problem& problem, const ControlField& u, double tau,
                                  std::size_t samples, std::uint64_t seed,
                                  const SolverOptions& options = {});

/// Key = value summary.
void write_kkt_summary(std::ostream& out, const KKTReport& report);
/// CSV with header t,x,gradient,lower,upper,inactive (one row per window node and level).
void write_kkt_masks_csv(std::ostream& out, const Grid& grid, const KKTReport& report);

}  // namespace fracctl
