#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "fracctl/control.hpp"
#include "fracctl/io.hpp"
#include "fracctl/norms.hpp"
#include "fracctl/optimize.hpp"
#include "fracctl/pde_solvers.hpp"
#include "fracctl/verify.hpp"
#include "verify_detail.hpp"

namespace fracctl {
namespace {

double relative(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

double slope(double e_coarse, double e_fine, double ratio) {
    return std::log(e_coarse / e_fine) / std::log(ratio);
}

// Order of the remainder |G(v + eps w) - G(v) - eps G'(v) w| as eps shrinks.
double remainder_order(const std::vector<double>& eps, const std::vector<double>& remainders) {
    return slope(remainders.front(), remainders.back(), eps.front() / eps.back());
}

Problem random_derivative_problem(std::mt19937_64& rng, bool zero_initial) {
    const Grid grid = detail::random_window_grid(rng, 32, 0.5, 64);
    const double s = detail::random_order(rng);
    const double alpha = std::uniform_real_distribution<double>(0.5, 2.0)(rng);
    Vector rho0 = detail::random_vector(rng, 32, 0.0, 1.0);
    const Vector rhod = detail::random_vector(rng, 32, -0.5, 0.5);
    if (zero_initial) rho0.setZero();
    return Problem(ProblemSpec{grid, s, alpha, Box{-1.0, 1.0}, rho0, rhod, 1});
}

}  // namespace

VerifyReport run_derivative_suite(std::uint64_t seed, std::size_t cases) {
    VerifyReport report;
    std::ostringstream desc;
    desc << "derivatives: " << cases << " cases, n=32, nt=64, T=0.5, box [-1,1], seed=" << seed;
    report.describe(desc.str());

    std::mt19937_64 rng(seed + 404);
    double worst_gradient = 0.0, worst_duality = 0.0, worst_symmetry = 0.0, worst_second = 0.0;
    double worst_linearized = std::numeric_limits<double>::infinity();
    double worst_second_order = std::numeric_limits<double>::infinity();
    double best_sweep = std::numeric_limits<double>::infinity();
    double zero_initial_gap = 0.0;

    for (std::size_t c = 0; c < cases; ++c) {
        const bool zero_initial = c == 0;
        const Problem problem = random_derivative_problem(rng, zero_initial);
        const Grid& grid = problem.grid();
        const ControlField v = detail::random_control(rng, grid, -0.8, 0.8);
        const ControlField w = detail::gaussian_control(rng, grid);
        const ControlField d = detail::gaussian_control(rng, grid);

        const ControlPoint point(problem, v);
        const double directional = point.derivative(w);

        const double eps = 1e-5;
        const double fd = (cost(problem, v + eps * w) - cost(problem, v - eps * w)) / (2.0 * eps);
        worst_gradient = std::max(worst_gradient, relative(directional, fd));

        // Duality: terminal pairing against the linearized state equals the
        // window pairing of the direction with state times adjoint.
        const TimeField y = point.sensitivity(w);
        const std::size_t nt = grid.nt();
        const double lhs = grid.dx() * (point.state()[nt] - problem.rhod()).dot(y[nt]);
        double rhs = 0.0;
        for (std::size_t k = 1; k <= nt; ++k) {
            rhs += window_product(grid, w, k, point.state()[k]).dot(point.adjoint()[k]);
        }
        rhs *= grid.dx() * grid.dt();
        worst_duality = std::max(worst_duality, relative(lhs, rhs));

        const double h_wd = point.hessian(w, d);
        const double h_dw = point.hessian(d, w);
        worst_symmetry = std::max(worst_symmetry, relative(h_wd, h_dw));

        const double h = 1e-3;
        const double second_fd =
            (cost(problem, v + h * w) - 2.0 * point.cost() + cost(problem, v - h * w)) / (h * h);
        worst_second = std::max(worst_second, relative(point.hessian(w, w), second_fd));

        // Taylor remainders of the control-to-state map and its derivative.
        const StepSolver& steps = point.steps();
        const TimeField y_w = y;
        const TimeField y_d = point.sensitivity(d);
        const TimeField z = solve_second(steps, w, d, y_w, y_d);
        const std::vector<double> radii{1e-2, 5e-3};
        std::vector<double> first_remainder, second_remainder;
        for (double r : radii) {
            const ControlField moved = v + r * w;
            const TimeField rho_r = solve_state(problem, moved);
            TimeField diff = rho_r - point.state() - r * y_w;
            first_remainder.push_back(l2_l2_norm(grid, diff));

            const StepSolver moved_steps(problem, moved);
            const TimeField y_d_r = solve_linearized(moved_steps, d, rho_r);
            TimeField diff2 = y_d_r - y_d - r * z;
            second_remainder.push_back(l2_l2_norm(grid, diff2));
        }
        worst_linearized = std::min(worst_linearized, remainder_order(radii, first_remainder));
        if (!zero_initial) {
            worst_second_order = std::min(worst_second_order, remainder_order(radii, second_remainder));
        }

        if (c == 1) {
            std::ostringstream sweep;
            sweep << "relative error at eps=1e-1..1e-10:";
            for (int e = 1; e <= 10; ++e) {
                const double step = std::pow(10.0, -e);
                const double estimate =
                    (cost(problem, v + step * w) - cost(problem, v - step * w)) / (2.0 * step);
                const double err = relative(directional, estimate);
                best_sweep = std::min(best_sweep, err);
                sweep << ' ' << format_double(err);
            }
            report.expect("gradient_fd_sweep_minimum", "gradient-formula", best_sweep < 1e-7, best_sweep,
                          1e-7, sweep.str());
        }

        if (zero_initial) {
            const ControlField expected = problem.alpha() * v;
            zero_initial_gap = (point.gradient().values() - expected.values()).cwiseAbs().maxCoeff();
        }
    }

    report.expect("gradient_finite_difference", "gradient-formula", worst_gradient <= 1e-6,
                  worst_gradient, 1e-6, "central difference, eps = 1e-5, relative");
    report.expect("duality_identity", "duality-identity", worst_duality <= 1e-12, worst_duality, 1e-12);
    report.expect("hessian_symmetry", "hessian-formula", worst_symmetry <= 1e-13, worst_symmetry, 1e-13);
    report.expect("hessian_second_difference", "hessian-formula", worst_second <= 1e-4, worst_second,
                  1e-4, "second central difference, eps = 1e-3, relative");
    report.expect("linearized_remainder_order", "sensitivity-derivative",
                  std::abs(worst_linearized - 2.0) <= 0.2, worst_linearized, 2.0,
                  "minimum observed order of |G(v+ew)-G(v)-eG'(v)w|; first-order slope is order - 1");
    report.expect("second_order_remainder_order", "second-order-system",
                  std::abs(worst_second_order - 2.0) <= 0.2, worst_second_order, 2.0,
                  "minimum observed order of |G'(v+ew)d - G'(v)d - e z|");
    report.expect("gradient_zero_initial_state", "gradient-formula", zero_initial_gap <= 1e-14,
                  zero_initial_gap, 1e-14, "rho0 = 0 gives gradient = alpha v");
    return report;
}

VerifyReport run_lipschitz_suite(std::uint64_t seed, std::size_t pairs) {
    VerifyReport report;
    std::ostringstream desc;
    desc << "lipschitz: " << pairs
         << " smooth control pairs on the benchmark instance at (n, nt) = (31, 50), (63, 100), (127, 200), seed="
         << seed;
    report.describe(desc.str());

    std::mt19937_64 rng(seed + 505);
    std::vector<std::pair<detail::SmoothField, detail::SmoothField>> fields;
    for (std::size_t p = 0; p < pairs; ++p) {
        auto first = detail::SmoothField::draw(rng, 1.0);
        auto second = detail::SmoothField::draw(rng, 1.0);
        fields.emplace_back(first, second);
    }

    const std::size_t levels[3][2] = {{31, 50}, {63, 100}, {127, 200}};
    double state_ratio[3] = {0, 0, 0};
    double adjoint_ratio[3] = {0, 0, 0};
    double state_scaling_error = 0.0;
    double adjoint_scaling_error = 0.0;
    double identical_gap = 0.0;

    for (int level = 0; level < 3; ++level) {
        const Problem problem(benchmark_spec(levels[level][0], levels[level][1]));
        const Problem scaled = problem.with_data(0.1 * problem.rho0(), 0.1 * problem.rhod());
        const Grid& grid = problem.grid();
        const FractionalOperator& op = problem.op();
        for (std::size_t p = 0; p < pairs; ++p) {
            const ControlField v1 = fields[p].first.sample(grid, problem.box());
            const ControlField v2 = fields[p].second.sample(grid, problem.box());
            const double gap = l2_norm(grid, v1 - v2);
            if (gap == 0.0) continue;
            const GradientResult a = gradient(problem, v1);
            const GradientResult b = gradient(problem, v2);
            const double ds = l2_v_norm(grid, op, a.state - b.state);
            const double dq = l2_v_norm(grid, op, a.adjoint - b.adjoint);
            state_ratio[level] = std::max(state_ratio[level], ds / gap);
            adjoint_ratio[level] = std::max(adjoint_ratio[level], dq / gap);

            if (level == 0) {
                const GradientResult sa = gradient(scaled, v1);
                const GradientResult sb = gradient(scaled, v2);
                const double sds = l2_v_norm(grid, op, sa.state - sb.state);
                const double sdq = l2_v_norm(grid, op, sa.adjoint - sb.adjoint);
                state_scaling_error = std::max(state_scaling_error, relative(ds / sds, 10.0));
                adjoint_scaling_error = std::max(adjoint_scaling_error, relative(dq / sdq, 10.0));
                if (p == 0) {
                    const GradientResult again = gradient(problem, v1);
                    identical_gap = l2_v_norm(grid, op, a.state - again.state) +
                                    l2_v_norm(grid, op, a.adjoint - again.adjoint);
                }
            }
        }
    }

    auto stable = [](const double (&r)[3]) {
        for (int i = 1; i < 3; ++i) {
            const double q = r[i] / r[i - 1];
            if (!(q >= 0.5 && q <= 2.0)) return false;
        }
        return true;
    };
    auto sequence = [](const double (&r)[3]) {
        std::ostringstream out;
        out << "max ratio at the three levels:";
        for (double v : r) out << ' ' << format_double(v);
        return out.str();
    };

    report.expect("state_lipschitz_mesh_stable", "state-lipschitz", stable(state_ratio), state_ratio[2],
                  2.0, sequence(state_ratio));
    report.expect("adjoint_lipschitz_mesh_stable", "adjoint-lipschitz", stable(adjoint_ratio),
                  adjoint_ratio[2], 2.0, sequence(adjoint_ratio));
    report.expect("state_lipschitz_data_scaling", "state-lipschitz", state_scaling_error <= 1e-6,
                  state_scaling_error, 1e-6, "ratio change when rho0 is scaled by 0.1 must be 10");
    report.expect("adjoint_lipschitz_data_scaling", "adjoint-lipschitz", adjoint_scaling_error <= 1e-6,
                  adjoint_scaling_error, 1e-6,
                  "ratio change when rho0 and rho_d are scaled by 0.1 must be 10");
    report.expect("lipschitz_identical_controls", "state-lipschitz", identical_gap == 0.0, identical_gap,
                  0.0, "repeated evaluation at the same control");

    const ProblemSpec spec = benchmark_spec(levels[2][0], levels[2][1]);
    const double theta = spec.theta();
    const double T = spec.grid.horizon();
    const double growth = std::exp(theta * T);
    const double r0 = linf_norm(spec.rho0);
    const double rd = linf_norm(spec.rhod);
    report.note("state_lipschitz_constant_fit", "state-lipschitz",
                ((state_ratio[2] / (growth * r0) - 1.0) / growth - 2.0) / theta, 0.0,
                "C with ratio = [(2 + C theta) e^{theta T} + 1] e^{theta T} |rho0|_inf");
    report.note("adjoint_lipschitz_constant_fit", "adjoint-lipschitz",
                adjoint_ratio[2] / (std::exp(2.0 * theta * T) * (r0 + rd)), 0.0,
                "ratio / (e^{2 theta T} (|rho0|_inf + |rho_d|_inf))");
    return report;
}

VerifyReport run_optimality_suite(const Problem& problem, const OptimOptions& options,
                                  const VerifyConfig& config) {
    VerifyReport report;
    const Grid& grid = problem.grid();
    const Box& box = problem.box();
    const double alpha = problem.alpha();
    std::ostringstream desc;
    desc << "optimality: n=" << grid.n() << ", nt=" << grid.nt() << ", T=" << format_double(grid.horizon())
         << ", s=" << format_double(problem.spec().s) << ", alpha=" << format_double(alpha) << ", box ["
         << format_double(box.lower) << ", " << format_double(box.upper) << "], seed=" << config.seed;
    report.describe(desc.str());

    const UniquenessCondition unique = uniqueness_condition(problem.spec());
    const SmallnessCondition small = ssc_smallness(problem.spec(), config.domain_constant);
    report.note("uniqueness_condition_lhs", "uniqueness-condition", unique.lhs, alpha,
                unique.holds ? "condition holds" : "condition does not hold");
    report.note("smallness_condition_lhs", "smallness-condition", small.lhs, small.rhs,
                small.holds ? "condition holds" : "condition does not hold");

    OptimOptions run_options = options;
    run_options.kkt_tol = std::min(options.kkt_tol, config.kkt_tol);
    run_options.seed = config.seed;
    const OptimResult best = projected_gradient(problem, ControlField(grid), run_options);
    report.expect("optimizer_converged", "existence", best.status == OptimStatus::converged,
                  static_cast<double>(best.iterations), static_cast<double>(run_options.max_iters),
                  std::string("status ") + to_string(best.status));
    report.expect("kkt_residual", "first-order", best.kkt <= config.kkt_tol, best.kkt, config.kkt_tol);

    double worst_increase = 0.0;
    for (std::size_t i = 1; i < best.cost_history.size(); ++i) {
        worst_increase = std::max(worst_increase, best.cost_history[i] - best.cost_history[i - 1]);
    }
    const double monotone_slack =
        1e-14 * std::max(1.0, best.cost_history.empty() ? 1.0 : std::abs(best.cost_history.front()));
    report.expect("cost_monotone", "existence", worst_increase <= monotone_slack, worst_increase,
                  monotone_slack);

    const ControlPoint point(problem, best.u);
    const ControlField& g = point.gradient();
    std::mt19937_64 rng(config.seed + 606);
    double worst_vi = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < config.variational_samples; ++i) {
        const ControlField v = detail::random_control(rng, grid, box.lower, box.upper);
        worst_vi = std::min(worst_vi, inner(grid, g, v - best.u));
    }
    report.expect("variational_inequality", "first-order", worst_vi >= -1e-8, worst_vi, -1e-8,
                  "min over admissible samples of (J'(u), v - u)");

    const KKTReport kkt = kkt_residual(point);
    const ControlMask strongly = active_set(g, config.ssc_tau);
    Eigen::Index outside = 0;
    for (Eigen::Index c = 0; c < strongly.cols(); ++c) {
        for (Eigen::Index r = 0; r < strongly.rows(); ++r) {
            if (strongly(r, c) && !(kkt.lower_active(r, c) || kkt.upper_active(r, c))) ++outside;
        }
    }
    report.expect("active_set_on_bounds", "active-set", outside == 0, static_cast<double>(outside), 0.0,
                  "points with |J'(u)| > tau not at a bound, tau=" + format_double(config.ssc_tau));
    report.expect("kkt_sign_conditions", "first-order", kkt.violations == 0, static_cast<double>(kkt.violations), 0.0,
                  "grid points where the gradient sign disagrees with the box position");

    const CoercivityReport necessary =
        check_coercivity(point, 0.0, config.coercivity_samples, config.seed + 707);
    report.expect("second_order_necessary", "second-order-necessary",
                  necessary.status == CoercivityReport::Status::ok && necessary.necessary,
                  necessary.min_ratio / alpha, -1e-8,
                  "min J''(u)[v,v] / (alpha |v|^2) over the critical cone; samples " +
                      std::to_string(necessary.samples_used));

    const CoercivityReport sufficient =
        check_coercivity(point, config.ssc_tau, config.coercivity_samples, config.seed + 808);
    const bool conditions_hold = unique.holds && small.holds;
    const std::string ssc_detail = "min J''(u)[v,v] / |v|^2 over the tau-critical cone, tau=" +
                                   format_double(config.ssc_tau) + "; samples " +
                                   std::to_string(sufficient.samples_used);
    if (conditions_hold) {
        report.expect("second_order_sufficient", "second-order-sufficient",
                      sufficient.status == CoercivityReport::Status::ok && sufficient.sufficient,
                      sufficient.min_ratio, 0.5 * alpha, ssc_detail);
    } else {
        report.note("second_order_sufficient", "second-order-sufficient", sufficient.min_ratio, 0.5 * alpha,
                    ssc_detail + " (reported only: conditions do not hold)");
    }

    const double radius = 0.1 * box.width();
    double worst_growth_gap = std::numeric_limits<double>::infinity();
    double beta = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < config.growth_samples; ++i) {
        ControlField direction = detail::gaussian_control(rng, grid);
        const double norm = l2_norm(grid, direction);
        if (norm == 0.0) continue;
        const double scale = std::uniform_real_distribution<double>(0.05, 1.0)(rng) * radius / norm;
        const ControlField v = project(box, best.u + scale * direction);
        const double dist = l2_norm(grid, v - best.u);
        if (dist == 0.0) continue;
        const double gap = cost(problem, v) - best.cost;
        worst_growth_gap = std::min(worst_growth_gap, gap);
        beta = std::min(beta, gap / (dist * dist));
    }
    report.expect("quadratic_growth_local_minimum", "quadratic-growth", worst_growth_gap >= -1e-10,
                  worst_growth_gap, -1e-10, "min J(v) - J(u) over the ball of radius 0.1 (M - m)");
    report.note("quadratic_growth_beta", "quadratic-growth", beta, 0.0, "min (J(v) - J(u)) / |v - u|^2");

    OptimOptions fp_options = run_options;
    fp_options.damping = unique.holds ? 1.0 : options.damping;
    const OptimResult fp = fixed_point(problem, ControlField(grid), fp_options);
    const double fp_gap = l2_norm(grid, fp.u - best.u);
    if (unique.holds) {
        report.expect("fixed_point_agreement", "local-uniqueness",
                      fp.status == OptimStatus::converged && fp_gap <= 1e-6, fp_gap, 1e-6,
                      std::string("fixed-point status ") + to_string(fp.status));
    } else {
        report.note("fixed_point_agreement", "local-uniqueness", fp_gap, 1e-6,
                    std::string("fixed-point status ") + to_string(fp.status));
    }

    const MultistartReport multi = multistart_uniqueness(problem, config.multistart, run_options);
    const std::string multi_detail = std::to_string(config.multistart) + " starts, all converged: " +
                                     (multi.all_converged ? "yes" : "no");
    if (multi.asserted) {
        report.expect("multistart_uniqueness", "uniqueness-condition", multi.passed, multi.max_distance,
                      multi.threshold, multi_detail);
    } else {
        report.note("multistart_uniqueness", "uniqueness-condition", multi.max_distance, multi.threshold,
                    multi_detail + " (reported only: condition does not hold)");
    }
    return report;
}

}  // namespace fracctl
