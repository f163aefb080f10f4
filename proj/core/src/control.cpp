#include "fracctl/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>

#include "fracctl/error.hpp"
#include "fracctl/io.hpp"
#include "fracctl/norms.hpp"
#include "fracctl/pde_solvers.hpp"

namespace fracctl {
namespace {

bool at_lower(const Box& box, double u) { return u - box.lower <= kBoxTolerance * box.width(); }
bool at_upper(const Box& box, double u) { return box.upper - u <= kBoxTolerance * box.width(); }

}  // namespace

ControlPoint::ControlPoint(const Problem& problem, ControlField v, Depth depth,
                           const SolverOptions& options)
    : problem_(&problem),
      control_(std::move(v)),
      steps_(problem, control_, 0.0, options),
      state_(solve_state(steps_, problem.rho0())) {
    const Grid& grid = problem.grid();
    const Vector mismatch = state_[grid.nt()] - problem.rhod();
    tracking_ = 0.5 * grid.dx() * mismatch.squaredNorm();
    regularization_ = 0.5 * problem.alpha() * grid.dx() * grid.dt() * control_.values().squaredNorm();
    if (!std::isfinite(cost())) fail(ErrorKind::numerical, "cost is not finite");

    if (depth == Depth::gradient) {
        adjoint_ = solve_adjoint(steps_, mismatch);
        ControlField g = problem.alpha() * control_;
        const auto& nodes = grid.window_nodes();
        for (std::size_t k = 1; k <= grid.nt(); ++k) {
            const auto col = static_cast<Eigen::Index>(k) - 1;
            for (std::size_t j = 0; j < nodes.size(); ++j) {
                const auto i = static_cast<Eigen::Index>(nodes[j]);
                g.values()(static_cast<Eigen::Index>(j), col) += state_[k][i] * (*adjoint_)[k][i];
            }
        }
        if (!g.all_finite()) fail(ErrorKind::numerical, "gradient is not finite");
        gradient_ = std::move(g);
    }
}

const TimeField& ControlPoint::adjoint() const {
    if (!adjoint_) fail(ErrorKind::internal, "control point evaluated without adjoint");
    return *adjoint_;
}

const ControlField& ControlPoint::gradient() const {
    if (!gradient_) fail(ErrorKind::internal, "control point evaluated without gradient");
    return *gradient_;
}

double ControlPoint::derivative(const ControlField& w) const {
    return inner(problem_->grid(), gradient(), w);
}

ControlField ControlPoint::projection_argument() const {
    const Grid& grid = problem_->grid();
    const TimeField& q = adjoint();
    ControlField out(grid);
    const auto& nodes = grid.window_nodes();
    for (std::size_t k = 1; k <= grid.nt(); ++k) {
        const auto col = static_cast<Eigen::Index>(k) - 1;
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            const auto i = static_cast<Eigen::Index>(nodes[j]);
            out.values()(static_cast<Eigen::Index>(j), col) =
                -state_[k][i] * q[k][i] / problem_->alpha();
        }
    }
    return out;
}

TimeField ControlPoint::sensitivity(const ControlField& w) const {
    return solve_linearized(steps_, w, state_);
}

double ControlPoint::hessian(const ControlField& w, const ControlField& d) const {
    return hessian(w, d, sensitivity(w), sensitivity(d));
}

double ControlPoint::hessian(const ControlField& w, const ControlField& d, const TimeField& y_w,
                             const TimeField& y_d) const {
    const Grid& grid = problem_->grid();
    require(w.same_shape(control_) && d.same_shape(control_), ErrorKind::dimension_mismatch,
            "hessian: direction shape does not match control");
    const TimeField& q = adjoint();
    const auto& nodes = grid.window_nodes();
    double coupling = 0.0;
    for (std::size_t k = 1; k <= grid.nt(); ++k) {
        const auto col = static_cast<Eigen::Index>(k) - 1;
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            const auto jj = static_cast<Eigen::Index>(j);
            const auto i = static_cast<Eigen::Index>(nodes[j]);
            coupling += (d.values()(jj, col) * y_w[k][i] + w.values()(jj, col) * y_d[k][i]) * q[k][i];
        }
    }
    const double dxdt = grid.dx() * grid.dt();
    const double terminal = grid.dx() * y_w[grid.nt()].dot(y_d[grid.nt()]);
    const double tikhonov = problem_->alpha() * dxdt * w.values().cwiseProduct(d.values()).sum();
    return dxdt * coupling + terminal + tikhonov;
}

double cost(const Problem& problem, const ControlField& v, const SolverOptions& options) {
    return ControlPoint(problem, v, ControlPoint::Depth::cost, options).cost();
}

GradientResult gradient(const Problem& problem, const ControlField& v,
                        const SolverOptions& options) {
    ControlPoint point(problem, v, ControlPoint::Depth::gradient, options);
    return {point.gradient(), point.state(), point.adjoint(), point.cost()};
}

double hessian_bilinear(const Problem& problem, const ControlField& u, const ControlField& w,
                        const ControlField& d, const SolverOptions& options) {
    return ControlPoint(problem, u, ControlPoint::Depth::gradient, options).hessian(w, d);
}

ControlField project(const Box& box, const ControlField& raw) {
    require(raw.all_finite(), ErrorKind::invalid_argument, "project: input not finite");
    ControlField out = raw;
    out.values() = raw.values().cwiseMax(box.lower).cwiseMin(box.upper);
    return out;
}

KKTReport kkt_residual(const ControlPoint& point) {
    const Problem& problem = point.problem();
    const Grid& grid = problem.grid();
    const Box& box = problem.box();
    const ControlField& u = point.control();

    KKTReport report;
    report.gradient = point.gradient();
    report.residual = l2_norm(grid, u - project(box, point.projection_argument()));
    report.gradient_sup = report.gradient.sup_norm();

    const double tie = tie_threshold(problem, report.gradient);
    const auto rows = u.rows();
    const auto cols = u.cols();
    report.lower_active = ControlMask::Constant(rows, cols, false);
    report.upper_active = ControlMask::Constant(rows, cols, false);
    report.inactive = ControlMask::Constant(rows, cols, false);
    for (Eigen::Index c = 0; c < cols; ++c) {
        for (Eigen::Index r = 0; r < rows; ++r) {
            const double g = report.gradient.values()(r, c);
            const double value = u.values()(r, c);
            if (std::abs(g) <= tie) {
                report.inactive(r, c) = true;
            } else if (g > 0.0 && at_lower(box, value)) {
                report.lower_active(r, c) = true;
            } else if (g < 0.0 && at_upper(box, value)) {
                report.upper_active(r, c) = true;
            } else {
                ++report.violations;
            }
        }
    }
    return report;
}

KKTReport kkt_residual(const Problem& problem, const ControlField& u, const SolverOptions& options) {
    return kkt_residual(ControlPoint(problem, u, ControlPoint::Depth::gradient, options));
}

double tie_threshold(const Problem& problem, const ControlField& gradient) {
    return kTieTolerance * std::max(gradient.sup_norm(), problem.alpha() * problem.theta());
}

ControlMask active_set(const ControlField& gradient, double tau) {
    require(tau >= 0.0, ErrorKind::invalid_argument, "active_set: tau must be non-negative");
    return gradient.values().array().abs() > tau;
}

ControlMask active_set(const Problem& problem, const ControlField& u, double tau,
                       const SolverOptions& options) {
    return active_set(ControlPoint(problem, u, ControlPoint::Depth::gradient, options).gradient(),
                      tau);
}

ControlField critical_cone_project(const Box& box, const ControlField& u,
                                   const ControlField& gradient, double tau,
                                   const ControlField& v) {
    require(u.same_shape(v) && u.same_shape(gradient), ErrorKind::dimension_mismatch,
            "critical_cone_project: shapes differ");
    const ControlMask strongly_active = active_set(gradient, tau);
    ControlField out = v;
    for (Eigen::Index c = 0; c < u.cols(); ++c) {
        for (Eigen::Index r = 0; r < u.rows(); ++r) {
            double& value = out.values()(r, c);
            const double control = u.values()(r, c);
            if (strongly_active(r, c)) {
                value = 0.0;
            } else if (at_lower(box, control)) {
                value = std::max(value, 0.0);
            } else if (at_upper(box, control)) {
                value = std::min(value, 0.0);
            }
        }
    }
    return out;
}

ControlField critical_cone_project(const Problem& problem, const ControlField& u, double tau,
                                   const ControlField& v, const SolverOptions& options) {
    const ControlPoint point(problem, u, ControlPoint::Depth::gradient, options);
    return critical_cone_project(problem.box(), u, point.gradient(), tau, v);
}

UniquenessCondition uniqueness_condition(const ProblemSpec& spec) {
    const double r0 = linf_norm(spec.rho0);
    const double rd = linf_norm(spec.rhod);
    UniquenessCondition out;
    out.lhs = 3.0 * std::exp(3.0 * spec.theta() * spec.grid.horizon()) * (r0 * r0 + rd * rd);
    out.margin = spec.alpha - out.lhs;
    out.holds = out.lhs < spec.alpha;
    return out;
}

SmallnessCondition ssc_smallness(const ProblemSpec& spec, double domain_constant) {
    require(domain_constant >= 0.0, ErrorKind::invalid_argument,
            "ssc_smallness: domain constant must be non-negative");
    const double theta = spec.theta();
    const double r0 = linf_norm(spec.rho0);
    const double rd = linf_norm(spec.rhod);
    SmallnessCondition out;
    out.lhs = (6.0 + domain_constant * theta) * std::exp(2.0 * theta * spec.grid.horizon()) *
              (r0 + rd) * r0;
    out.rhs = 0.5 * spec.alpha;
    out.holds = out.lhs <= out.rhs;
    return out;
}

CoercivityReport check_coercivity(const ControlPoint& point, double tau, std::size_t samples,
                                  std::uint64_t seed) {
    const Problem& problem = point.problem();
    const Grid& grid = problem.grid();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    const double cut = std::max(tau, tie_threshold(problem, point.gradient()));
    CoercivityReport report;
    report.alpha = problem.alpha();
    report.min_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t sample = 0; sample < samples; ++sample) {
        ControlField raw(grid);
        for (Eigen::Index c = 0; c < raw.cols(); ++c) {
            for (Eigen::Index r = 0; r < raw.rows(); ++r) raw.values()(r, c) = normal(rng);
        }
        const ControlField direction =
            critical_cone_project(problem.box(), point.control(), point.gradient(), cut, raw);
        const double norm = l2_norm(grid, direction);
        if (norm < 1e-10) continue;
        const TimeField y = point.sensitivity(direction);
        const double ratio = point.hessian(direction, direction, y, y) / (norm * norm);
        report.min_ratio = std::min(report.min_ratio, ratio);
        ++report.samples_used;
    }
    if (report.samples_used == 0) {
        report.status = CoercivityReport::Status::inconclusive;
        report.min_ratio = 0.0;
        return report;
    }
    report.status = CoercivityReport::Status::ok;
    report.sufficient = report.min_ratio >= 0.5 * report.alpha;
    report.necessary = report.min_ratio >= -1e-8 * report.alpha;
    return report;
}

CoercivityReport check_coercivity(const Problem& problem, const ControlField& u, double tau,
                                  std::size_t samples, std::uint64_t seed,
                                  const SolverOptions& options) {
    const ControlPoint point(problem, u, ControlPoint::Depth::gradient, options);
    return check_coercivity(point, tau, samples, seed);
}

void write_kkt_summary(std::ostream& out, const KKTReport& report) {
    out << "kkt_residual = " << format_double(report.residual) << '\n';
    out << "gradient_sup = " << format_double(report.gradient_sup) << '\n';
    out << "lower_active = " << report.lower_active.count() << '\n';
    out << "upper_active = " << report.upper_active.count() << '\n';
    out << "inactive = " << report.inactive.count() << '\n';
    out << "violations = " << report.violations << '\n';
}

void write_kkt_masks_csv(std::ostream& out, const Grid& grid, const KKTReport& report) {
    out << "t,x,gradient,lower,upper,inactive\n";
    const auto& nodes = grid.window_nodes();
    for (std::size_t k = 1; k <= grid.nt(); ++k) {
        const auto c = static_cast<Eigen::Index>(k) - 1;
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            const auto r = static_cast<Eigen::Index>(j);
            out << format_double(grid.time(k)) << ',' << format_double(grid.node(nodes[j])) << ','
                << format_double(report.gradient.values()(r, c)) << ','
                << int(report.lower_active(r, c)) << ',' << int(report.upper_active(r, c)) << ','
                << int(report.inactive(r, c)) << '\n';
        }
    }
}

}  // namespace fracctl
