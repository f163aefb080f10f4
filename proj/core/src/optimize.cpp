#include "fracctl/optimize.hpp"

#include <cmath>
#include <ostream>
#include <random>

#include "fracctl/error.hpp"
#include "fracctl/io.hpp"

namespace fracctl {
namespace {

struct Iterate {
    ControlPoint point;
    double kkt;
};

Iterate evaluate(const Problem& problem, ControlField v, const SolverOptions& solver) {
    ControlPoint point(problem, std::move(v), ControlPoint::Depth::gradient, solver);
    const double kkt = l2_norm(problem.grid(), point.control() -
                                                   project(problem.box(), point.projection_argument()));
    return {std::move(point), kkt};
}

void finish(OptimResult& result, const Iterate& it) {
    result.u = it.point.control();
    result.rho = it.point.state();
    result.q = it.point.adjoint();
    result.cost = it.point.cost();
    result.kkt = it.kkt;
}

void record(OptimResult& result, const Iterate& it) {
    result.cost_history.push_back(it.point.cost());
    result.kkt_history.push_back(it.kkt);
}

}  // namespace

void OptimOptions::validate() const {
    require(armijo_c1 > 0.0 && armijo_c1 < 1.0, ErrorKind::invalid_argument,
            "optimizer: c1 must lie in (0, 1)");
    require(backtrack > 0.0 && backtrack < 1.0, ErrorKind::invalid_argument,
            "optimizer: backtrack factor must lie in (0, 1)");
    require(!initial_step || *initial_step > 0.0, ErrorKind::invalid_argument,
            "optimizer: initial step must be positive");
    require(kkt_tol > 0.0, ErrorKind::invalid_argument, "optimizer: kkt_tol must be positive");
    require(damping > 0.0 && damping <= 1.0, ErrorKind::invalid_argument,
            "optimizer: damping must lie in (0, 1]");
}

const char* to_string(OptimStatus status) noexcept {
    switch (status) {
        case OptimStatus::converged: return "converged";
        case OptimStatus::max_iters: return "max_iters";
        case OptimStatus::stalled: return "stalled";
        case OptimStatus::numerical_failure: return "numerical_failure";
    }
    return "unknown";
}

OptimResult projected_gradient(const Problem& problem, const ControlField& start,
                               const OptimOptions& options) {
    options.validate();
    problem.check_step_size();
    const Grid& grid = problem.grid();
    const Box& box = problem.box();
    const double sigma0 = options.initial_step.value_or(1.0 / problem.alpha());

    OptimResult result;
    std::optional<Iterate> current;
    try {
        current.emplace(evaluate(problem, project(box, start), options.solver));
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::numerical) throw;
        result.status = OptimStatus::numerical_failure;
        result.message = e.what();
        return result;
    }
    record(result, *current);

    while (true) {
        if (current->kkt <= options.kkt_tol) {
            result.status = OptimStatus::converged;
            break;
        }
        if (result.iterations >= options.max_iters) {
            result.status = OptimStatus::max_iters;
            break;
        }
        const ControlField& v = current->point.control();
        const ControlField& g = current->point.gradient();
        const double j0 = current->point.cost();

        double sigma = sigma0;
        std::optional<Iterate> accepted;
        bool moved = false;
        try {
            for (std::size_t bt = 0; bt <= options.max_backtracks; ++bt, sigma *= options.backtrack) {
                ControlField trial = project(box, v - sigma * g);
                if (trial == v) break;
                moved = true;
                const double decrease = options.armijo_c1 * inner(grid, g, v - trial);
                const ControlPoint probe(problem, trial, ControlPoint::Depth::cost, options.solver);
                if (probe.cost() <= j0 - decrease) {
                    accepted.emplace(evaluate(problem, std::move(trial), options.solver));
                    break;
                }
            }
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::numerical) throw;
            result.status = OptimStatus::numerical_failure;
            result.message = e.what();
            break;
        }
        if (!accepted) {
            result.status = OptimStatus::stalled;
            result.message = moved ? "line search exhausted" : "projected step is zero";
            break;
        }
        current = std::move(accepted);
        ++result.iterations;
        record(result, *current);
    }
    finish(result, *current);
    return result;
}

OptimResult fixed_point(const Problem& problem, const ControlField& start,
                        const OptimOptions& options) {
    options.validate();
    problem.check_step_size();
    const Grid& grid = problem.grid();
    const Box& box = problem.box();
    const double sigma = options.damping;

    OptimResult result;
    std::optional<Iterate> current;
    try {
        current.emplace(evaluate(problem, project(box, start), options.solver));
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::numerical) throw;
        result.status = OptimStatus::numerical_failure;
        result.message = e.what();
        return result;
    }
    record(result, *current);

    while (true) {
        if (current->kkt <= options.kkt_tol) {
            result.status = OptimStatus::converged;
            break;
        }
        if (result.iterations >= options.max_iters) {
            result.status = OptimStatus::max_iters;
            break;
        }
        const ControlField& v = current->point.control();
        ControlField next = (1.0 - sigma) * v +
                            sigma * project(box, current->point.projection_argument());
        // Convex combination of admissible fields stays in the box; anything
        // else means the arithmetic went wrong.
        if (next.sup_norm() > 10.0 * box.theta()) {
            fail(ErrorKind::internal, "fixed point: iterate left the admissible box");
        }
        const double step = l2_norm(grid, next - v);
        try {
            current.emplace(evaluate(problem, std::move(next), options.solver));
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::numerical) throw;
            result.status = OptimStatus::numerical_failure;
            result.message = e.what();
            break;
        }
        ++result.iterations;
        record(result, *current);
        if (step < 1e-14 && current->kkt > options.kkt_tol) {
            result.status = OptimStatus::stalled;
            result.message = "iterates stopped moving";
            break;
        }
    }
    finish(result, *current);
    return result;
}

ControlField random_admissible(const Grid& grid, const Box& box, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(box.lower, box.upper);
    ControlField out(grid);
    for (Eigen::Index c = 0; c < out.cols(); ++c) {
        for (Eigen::Index r = 0; r < out.rows(); ++r) out.values()(r, c) = uniform(rng);
    }
    return out;
}

MultistartReport multistart_uniqueness(const Problem& problem, std::size_t starts,
                                       const OptimOptions& options) {
    const Grid& grid = problem.grid();
    MultistartReport report;
    report.condition = uniqueness_condition(problem.spec());
    report.threshold = 1e-6 * problem.box().width() * std::sqrt(grid.window_measure());
    report.runs.reserve(starts);
    for (std::size_t i = 0; i < starts; ++i) {
        const ControlField start = random_admissible(grid, problem.box(), options.seed + i);
        report.runs.push_back(projected_gradient(problem, start, options));
    }
    report.all_converged = true;
    for (const auto& run : report.runs) {
        report.all_converged = report.all_converged && run.status == OptimStatus::converged;
    }
    for (std::size_t i = 0; i < report.runs.size(); ++i) {
        for (std::size_t j = i + 1; j < report.runs.size(); ++j) {
            const double d = l2_norm(grid, report.runs[i].u - report.runs[j].u);
            report.distances.push_back(d);
            report.max_distance = std::max(report.max_distance, d);
        }
    }
    report.asserted = report.condition.holds;
    report.passed = !report.asserted ||
                    (report.all_converged && report.max_distance <= report.threshold);
    return report;
}

void write_run_summary(std::ostream& out, const OptimResult& result) {
    out << "status = " << to_string(result.status) << '\n';
    out << "iterations = " << result.iterations << '\n';
    out << "cost = " << format_double(result.cost) << '\n';
    out << "kkt_residual = " << format_double(result.kkt) << '\n';
    if (!result.message.empty()) out << "message = " << result.message << '\n';
}

void write_history_csv(std::ostream& out, const OptimResult& result) {
    out << "iteration,cost,kkt\n";
    for (std::size_t i = 0; i < result.cost_history.size(); ++i) {
        out << i << ',' << format_double(result.cost_history[i]) << ','
            << format_double(result.kkt_history[i]) << '\n';
    }
}

}  // namespace fracctl
