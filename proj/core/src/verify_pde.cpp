#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "fracctl/io.hpp"
#include "fracctl/norms.hpp"
#include "fracctl/pde_solvers.hpp"
#include "fracctl/verify.hpp"
#include "verify_detail.hpp"

namespace fracctl {
namespace {

constexpr double kEstimateSlack = 1.1;

// (|z|^2_{L2(V)} + |z_t|^2_{L2(V*)})^{1/2} with backward differences in time.
double w_norm(const Grid& grid, const FractionalOperator& op, const TimeField& z) {
    TimeField rate(z.size(), z.levels());
    for (std::size_t k = 1; k <= z.levels(); ++k) rate[k] = (z[k] - z[k - 1]) / grid.dt();
    const double v = l2_v_norm(grid, op, z);
    const double vs = l2_vstar_norm(grid, op, rate);
    return std::sqrt(v * v + vs * vs);
}

}  // namespace

VerifyReport run_maximum_principle_suite(std::uint64_t seed, std::size_t cases, std::size_t nodes,
                                         std::size_t steps) {
    VerifyReport report;
    std::ostringstream desc;
    desc << "maximum principle: " << cases << " cases, n=" << nodes << ", nt=" << steps
         << ", T=1, box [-1,1], seed=" << seed;
    report.describe(desc.str());

    std::mt19937_64 rng(seed + 101);
    const Box box{-1.0, 1.0};
    const double theta = box.theta();
    std::size_t negativity_failures = 0;
    std::size_t bound_failures = 0;
    double worst_negativity = 0.0;
    double worst_discrete_ratio = 0.0;
    double worst_continuum_ratio = 0.0;

    for (std::size_t c = 0; c < cases; ++c) {
        const bool full_window = c == 2;
        const Grid grid = full_window ? Grid::full_window(-1.0, 1.0, nodes, 1.0, steps)
                                      : detail::random_window_grid(rng, nodes, 1.0, steps);
        const double s = detail::random_order(rng);
        Vector rho0 = detail::random_vector(rng, nodes, 0.0, 1.0);
        std::bernoulli_distribution keep(0.7);
        for (Eigen::Index i = 0; i < rho0.size(); ++i) {
            if (!keep(rng)) rho0[i] = 0.0;
        }
        if (c == 0) rho0.setZero();

        ControlField v = detail::random_control(rng, grid, box.lower, box.upper);
        if (c == 1) {
            // Adversarial: alternate +theta / -theta per time level.
            for (Eigen::Index k = 0; k < v.cols(); ++k) {
                v.values().col(k).setConstant(k % 2 == 0 ? theta : -theta);
            }
        } else if (c == 2) {
            v = ControlField::constant(grid, theta);
        }

        const Problem problem(ProblemSpec{grid, s, 1.0, box, rho0, Vector::Zero(rho0.size()), 1});
        const TimeField rho = solve_state(problem, v);
        const double scale = linf_norm(rho0);
        const double dt = grid.dt();

        const double minimum = rho.min_value();
        if (minimum < -1e-12 * scale) ++negativity_failures;
        if (scale > 0.0) worst_negativity = std::max(worst_negativity, -minimum / scale);

        for (std::size_t k = 0; k <= grid.nt(); ++k) {
            const double norm = linf_norm(rho[k]);
            const double discrete = std::pow(1.0 - dt * theta, -static_cast<double>(k)) * scale;
            if (norm > discrete) ++bound_failures;
            if (scale > 0.0 && k > 0) {
                worst_discrete_ratio = std::max(worst_discrete_ratio, norm / discrete);
                worst_continuum_ratio =
                    std::max(worst_continuum_ratio, norm / (std::exp(theta * grid.time(k)) * scale));
            }
        }
    }

    report.expect("state_nonnegative", "state-nonnegativity", negativity_failures == 0,
                  static_cast<double>(negativity_failures), 0.0,
                  "failing cases; worst -min/|rho0|_inf = " + format_double(worst_negativity));
    report.expect("state_linf_discrete_bound", "state-linf-bound", bound_failures == 0,
                  static_cast<double>(bound_failures), 0.0,
                  "|rho^k|_inf <= (1 - dt theta)^{-k} |rho0|_inf; worst ratio " +
                      format_double(worst_discrete_ratio));
    report.expect("state_linf_continuum_ratio", "state-linf-bound", worst_continuum_ratio <= 1.05,
                  worst_continuum_ratio, 1.05, "max over k >= 1 of |rho^k|_inf / (e^{theta t_k} |rho0|_inf)");
    const double slack = std::pow(1.0 - theta / static_cast<double>(steps), -static_cast<double>(steps)) /
                         std::exp(theta);
    report.note("state_linf_discrete_slack", "state-linf-bound", slack, 1.0,
                "(1 - dt theta)^{-nt} / e^{theta T}");
    return report;
}

VerifyReport run_estimate_suite(std::uint64_t seed, std::size_t cases) {
    VerifyReport report;
    std::ostringstream desc;
    desc << "estimates: " << cases << " cases, n=64, nt=256, T=1, box [-1,1], slack "
         << kEstimateSlack << ", seed=" << seed;
    report.describe(desc.str());

    std::mt19937_64 rng(seed + 202);
    const Box box{-1.0, 1.0};
    const std::size_t n = 64;
    const std::size_t nt = 256;

    std::size_t failures[6] = {0, 0, 0, 0, 0, 0};
    double worst[6] = {0, 0, 0, 0, 0, 0};
    std::size_t adjoint_discrete_failures = 0;
    const double lowest = std::numeric_limits<double>::lowest();
    double fit_shifted_w = lowest, fit_sourced_w = lowest, fit_state_w = lowest, fit_adjoint_w = lowest,
           fit_sensitivity = 0.0;

    auto check = [&](int slot, double lhs, double rhs) {
        const double ratio = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        worst[slot] = std::max(worst[slot], ratio);
        if (lhs > kEstimateSlack * rhs) ++failures[slot];
    };

    for (std::size_t c = 0; c < cases; ++c) {
        const Grid grid = detail::random_window_grid(rng, n, 1.0, nt);
        const double s = detail::random_order(rng);
        Vector rho0 = detail::random_vector(rng, n, -1.0, 1.0);
        Vector rhod = detail::random_vector(rng, n, -1.0, 1.0);
        const double amplitude = std::uniform_real_distribution<double>(0.0, 2.0)(rng);
        ControlField v = detail::random_control(rng, grid, box.lower, box.upper);
        TimeField f(n, nt);
        std::normal_distribution<double> normal(0.0, amplitude);
        for (std::size_t k = 1; k <= nt; ++k) {
            for (Eigen::Index i = 0; i < f[k].size(); ++i) f[k][i] = normal(rng);
        }
        if (c == 0) {
            rho0.setZero();
            for (std::size_t k = 0; k <= nt; ++k) f[k].setZero();
        }

        const Problem problem(ProblemSpec{grid, s, 1.0, box, rho0, rhod, 1});
        const FractionalOperator& op = problem.op();
        const double r = v.sup_norm();
        const double T = grid.horizon();
        const double f_dual = l2_vstar_norm(grid, op, f);
        const double rho0_l2 = l2_norm(grid.dx(), rho0);
        const double data = f_dual * f_dual + rho0_l2 * rho0_l2;

        const TimeField z = solve_shifted(problem, v, f);
        const double z_sup = sup_l2_norm(grid, z);
        const double z_v = l2_v_norm(grid, op, z);
        check(0, z_sup * z_sup, data);
        check(1, z_v * z_v, data);

        const TimeField rho = solve_sourced(problem, v, f);
        const double growth = std::exp(2.0 * r * T);
        const double rho_sup = sup_l2_norm(grid, rho);
        const double rho_v = l2_v_norm(grid, op, rho);
        check(2, rho_sup * rho_sup, growth * data);
        check(3, rho_v * rho_v, growth * data);

        const StepSolver steps(problem, v);
        const TimeField state = solve_state(steps, rho0);
        check(4, sup_l2_norm(grid, state), std::exp(r * T) * rho0_l2);

        const Vector terminal = state[nt] - rhod;
        const TimeField q = solve_adjoint(steps, terminal);
        const double terminal_inf = linf_norm(terminal);
        for (std::size_t k = 1; k <= nt; ++k) {
            const double bound =
                std::pow(1.0 - grid.dt() * r, -static_cast<double>(nt - k + 1)) * terminal_inf;
            if (linf_norm(q[k]) > bound) ++adjoint_discrete_failures;
        }
        check(5, linf_norm(q), std::exp(r * T) * (linf_norm(state[nt]) + linf_norm(rhod)));

        // Constant-carrying estimates: record the smallest C that would make them hold.
        const double source_data = f_dual + rho0_l2;
        if (source_data > 0.0 && r > 0.0) {
            fit_shifted_w = std::max(fit_shifted_w, (w_norm(grid, op, z) / source_data - 3.0) / r);
            fit_sourced_w = std::max(
                fit_sourced_w,
                ((w_norm(grid, op, rho) / source_data - 1.0) / std::exp(r * T) - 1.0) / r);
        }
        if (rho0_l2 > 0.0 && r > 0.0) {
            fit_state_w = std::max(fit_state_w,
                                   (w_norm(grid, op, state) / (std::exp(r * T) * rho0_l2) - 1.0) / r);
        }
        const double adjoint_data = rho0_l2 + l2_norm(grid.dx(), rhod);
        if (adjoint_data > 0.0 && r > 0.0) {
            fit_adjoint_w = std::max(
                fit_adjoint_w, (w_norm(grid, op, q) / (std::exp(r * T) * adjoint_data) - 2.0) / r);
        }
        const ControlField w = detail::gaussian_control(rng, grid);
        const TimeField y = solve_linearized(steps, w, state);
        const double sens_data = l2_norm(grid, w) * linf_norm(rho0);
        if (sens_data > 0.0) fit_sensitivity = std::max(fit_sensitivity, w_norm(grid, op, y) / sens_data);
    }

    const char* names[6] = {"shifted_sup_l2_energy", "shifted_l2_v_energy", "sourced_sup_l2_energy",
                            "sourced_l2_v_energy",   "state_sup_l2_bound",  "adjoint_linf_bound"};
    const char* claims[6] = {"shifted-energy", "shifted-energy", "sourced-energy",
                             "sourced-energy", "state-l2-bound", "adjoint-linf-bound"};
    for (int slot = 0; slot < 6; ++slot) {
        report.expect(names[slot], claims[slot], failures[slot] == 0, worst[slot], kEstimateSlack,
                      "worst lhs/rhs over cases; failures " + std::to_string(failures[slot]));
    }
    report.expect("adjoint_linf_discrete_bound", "adjoint-linf-bound", adjoint_discrete_failures == 0,
                  static_cast<double>(adjoint_discrete_failures), 0.0,
                  "|q^k|_inf <= (1 - dt |v|)^{-(nt-k+1)} |terminal|_inf");
    report.note("shifted_w_norm_constant_fit", "w-norm-estimate", fit_shifted_w, 0.0,
                "smallest C with |z|_W <= (C r + 3)(|f| + |rho0|)");
    report.note("sourced_w_norm_constant_fit", "w-norm-estimate", fit_sourced_w, 0.0,
                "smallest C with |rho|_W <= [(1 + C r) e^{rT} + 1](|f| + |rho0|)");
    report.note("state_w_norm_constant_fit", "w-norm-estimate", fit_state_w, 0.0,
                "smallest C with |rho|_W <= (1 + C r) e^{rT} |rho0|");
    report.note("adjoint_w_norm_constant_fit", "adjoint-w-estimate", fit_adjoint_w, 0.0,
                "smallest C with |q|_W <= (2 + C r) e^{rT} (|rho0| + |rho_d|)");
    report.note("sensitivity_w_norm_ratio", "sensitivity-bound", fit_sensitivity, 0.0,
                "max |y|_W / (|w|_{L2(omega_T)} |rho0|_inf)");

    // Refinement in time for one fixed instance.
    {
        std::mt19937_64 fixed(seed + 303);
        const double s = detail::random_order(fixed);
        const Vector rho0 = detail::random_vector(fixed, n, -1.0, 1.0);
        const detail::SmoothField control = detail::SmoothField::draw(fixed, 1.0);
        const detail::SmoothField source = detail::SmoothField::draw(fixed, 1.0);
        std::vector<double> slacks;
        bool all_ok = true;
        for (std::size_t steps : {64u, 128u, 256u, 512u}) {
            const Grid grid = Grid::full_window(-1.0, 1.0, n, 1.0, steps);
            const Problem problem(ProblemSpec{grid, s, 1.0, box, rho0, Vector::Zero(n), 1});
            const ControlField v = control.sample(grid, box);
            TimeField f(n, steps);
            for (std::size_t k = 1; k <= steps; ++k) {
                for (std::size_t i = 0; i < n; ++i) {
                    f[k][static_cast<Eigen::Index>(i)] = source(0.5 * (grid.node(i) + 1.0), grid.time(k));
                }
            }
            const double r = v.sup_norm();
            const double fd = l2_vstar_norm(grid, problem.op(), f);
            const double r0 = l2_norm(grid.dx(), rho0);
            const double data = fd * fd + r0 * r0;
            const TimeField z = solve_shifted(problem, v, f);
            const TimeField rho = solve_sourced(problem, v, f);
            const double zs = sup_l2_norm(grid, z), zv = l2_v_norm(grid, problem.op(), z);
            const double rs = sup_l2_norm(grid, rho), rv = l2_v_norm(grid, problem.op(), rho);
            const double g = std::exp(2.0 * r * grid.horizon());
            const double worst_slack =
                std::max({zs * zs / data, zv * zv / data, rs * rs / (g * data), rv * rv / (g * data)});
            slacks.push_back(worst_slack);
            all_ok = all_ok && worst_slack <= kEstimateSlack;
        }
        std::ostringstream detail;
        detail << "worst lhs/rhs at nt=64,128,256,512:";
        for (double v : slacks) detail << ' ' << format_double(v);
        report.expect("energy_refinement_in_time", "shifted-energy", all_ok,
                      *std::max_element(slacks.begin(), slacks.end()), kEstimateSlack, detail.str());
    }
    return report;
}

}  // namespace fracctl
