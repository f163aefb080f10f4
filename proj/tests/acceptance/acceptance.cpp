// One PASS/FAIL line per acceptance criterion. Exit status is non-zero when a
// criterion fails without being listed via --known-failure, or when a listed
// criterion unexpectedly passes.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fracctl/fractional_operator.hpp"
#include "fracctl/io.hpp"
#include "fracctl/norms.hpp"
#include "fracctl/optimize.hpp"
#include "fracctl/verify.hpp"
#include "fracctl_cli/commands.hpp"

using namespace fracctl;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int id;
    bool ok;
    std::string text;
};

std::vector<Outcome> outcomes;

void record(int id, bool ok, const std::string& text) {
    outcomes.push_back({id, ok, text});
    std::printf("C%02d %s %s\n", id, ok ? "PASS" : "FAIL", text.c_str());
    std::fflush(stdout);
}

std::string num(double v) { return format_double(v); }

bool check_passed(const VerifyReport& report, const std::string& name, std::ostringstream& text) {
    const CheckResult* c = report.find(name);
    if (c == nullptr) {
        text << ' ' << name << "=missing";
        return false;
    }
    text << ' ' << name << '=' << num(c->measured) << " (limit " << num(c->threshold) << ')';
    return c->status == CheckStatus::pass;
}

void criterion_1() {
    std::ostringstream text;
    text << "operator normalization s=0.5, |x|<=0.8, errors n=64,128,256:";
    std::vector<double> errors;
    for (std::size_t n : {64u, 128u, 256u}) {
        const Grid grid = Grid::full_window(-1.0, 1.0, n, 1.0, 1);
        const FractionalOperator op(grid, 0.5);
        Vector u(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) {
            u[static_cast<Eigen::Index>(i)] = std::sqrt(std::max(0.0, 1.0 - grid.node(i) * grid.node(i)));
        }
        const Vector Au = op.apply(u);
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs(grid.node(i)) <= 0.8 + 1e-12) {
                err = std::max(err, std::abs(Au[static_cast<Eigen::Index>(i)] - 1.0));
            }
        }
        errors.push_back(err);
        text << ' ' << num(err);
    }
    const bool decreasing = errors[1] < errors[0] && errors[2] < errors[1];
    text << "; target <= 1e-3 at n=256, decreasing=" << (decreasing ? "yes" : "no");
    record(1, decreasing && errors[2] <= 1e-3, text.str());
}

void criterion_2() {
    const Vector g = assemble_weights(0.5, 64);
    double worst = 0.0;
    for (Eigen::Index k = 0; k < g.size(); ++k) {
        const double exact = 4.0 / std::numbers::pi / ((1.0 - 2.0 * k) * (1.0 + 2.0 * k));
        worst = std::max(worst, std::abs(g[k] - exact));
    }
    const double c_err = std::abs(normalization_constant(0.5) - 1.0 / std::numbers::pi);
    record(2, worst <= 1e-14 && c_err <= 1e-14,
           "weights s=0.5 max error " + num(worst) + ", C(1/2) error " + num(c_err) + " (limit 1e-14)");
}

void criteria_3_4() {
    const VerifyReport mp = run_maximum_principle_suite(7, 100, 64, 512);
    std::ostringstream t3, t4;
    t3 << "maximum principle, 100 cases, n=64, nt=512:";
    const bool ok3 = check_passed(mp, "state_nonnegative", t3);
    record(3, ok3, t3.str());
    t4 << "discrete sup bound, 100 cases, n=64, nt=512:";
    const bool bound = check_passed(mp, "state_linf_discrete_bound", t4);
    const bool ratio = check_passed(mp, "state_linf_continuum_ratio", t4);
    record(4, bound && ratio, t4.str());
}

void criterion_5(const VerifyReport& r) {
    std::ostringstream t;
    t << "energy estimates, 50 cases, n=64, nt=256, slack 1.1:";
    bool ok = true;
    for (const char* name : {"shifted_sup_l2_energy", "shifted_l2_v_energy", "sourced_sup_l2_energy",
                             "sourced_l2_v_energy"}) {
        ok = check_passed(r, name, t) && ok;
    }
    record(5, ok, t.str());
}

void criterion_6(const VerifyReport& r) {
    std::ostringstream t;
    t << "gradient, 20 instances:";
    const bool a = check_passed(r, "duality_identity", t);
    const bool b = check_passed(r, "gradient_finite_difference", t);
    record(6, a && b, t.str());
}

void criterion_7(const VerifyReport& r) {
    std::ostringstream t;
    t << "Hessian, 20 instances:";
    const bool a = check_passed(r, "hessian_symmetry", t);
    const bool b = check_passed(r, "hessian_second_difference", t);
    record(7, a && b, t.str());
}

void criterion_8(const VerifyReport& r) {
    std::ostringstream t;
    t << "KKT on benchmark n=127, nt=200:";
    bool ok = check_passed(r, "optimizer_converged", t);
    ok = check_passed(r, "kkt_residual", t) && ok;
    ok = check_passed(r, "variational_inequality", t) && ok;
    ok = check_passed(r, "fixed_point_agreement", t) && ok;
    record(8, ok, t.str());
}

void criterion_9() {
    ProblemSpec spec = benchmark_spec();
    spec.rho0.setZero();
    const Problem problem(spec);
    const double expected = 0.5 * std::pow(l2_norm(problem.grid().dx(), problem.rhod()), 2);
    double worst_u = 0.0;
    double worst_j = 0.0;
    bool converged = true;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const OptimResult r = projected_gradient(problem, random_admissible(problem.grid(), problem.box(), seed));
        converged = converged && r.status == OptimStatus::converged;
        worst_u = std::max(worst_u, l2_norm(problem.grid(), r.u));
        worst_j = std::max(worst_j, std::abs(r.cost - expected));
    }
    record(9, converged && worst_u <= 1e-8 && worst_j <= 1e-12,
           "rho0=0, 5 starts: max |u| " + num(worst_u) + " (limit 1e-8), max |J - J*| " + num(worst_j) +
               " (limit 1e-12)");
}

void criterion_10(const VerifyReport& r) {
    std::ostringstream t;
    t << "second order on benchmark, 64 directions:";
    const bool a = check_passed(r, "second_order_sufficient", t);
    const bool b = check_passed(r, "second_order_necessary", t);
    const CheckResult* u = r.find("uniqueness_condition_lhs");
    if (u != nullptr) t << " uniqueness lhs=" << num(u->measured);
    record(10, a && b, t.str());
}

void criterion_11(const VerifyReport& r) {
    std::ostringstream t;
    t << "local uniqueness, 8 starts:";
    const bool ok = check_passed(r, "multistart_uniqueness", t);
    record(11, ok, t.str());
}

void criterion_12(const VerifyReport& r) {
    std::ostringstream t;
    t << "Lipschitz, 50 pairs:";
    bool ok = true;
    for (const char* name : {"state_lipschitz_mesh_stable", "adjoint_lipschitz_mesh_stable",
                             "state_lipschitz_data_scaling", "adjoint_lipschitz_data_scaling"}) {
        ok = check_passed(r, name, t) && ok;
    }
    record(12, ok, t.str());
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void criterion_13(const fs::path& scratch) {
    cli::RunConfig config;
    config.verify.seed = 7;
    config.optimizer.seed = 7;
    int codes[2] = {0, 0};
    std::string logs[2];
    for (int run = 0; run < 2; ++run) {
        config.output_dir = (scratch / ("run" + std::to_string(run))).string();
        std::ostringstream log;
        codes[run] = cli::guarded(std::cerr, [&] { return cli::cmd_verify(config, log); });
        logs[run] = log.str();
    }
    const bool same_text = slurp(scratch / "run0" / "report.txt") == slurp(scratch / "run1" / "report.txt");
    const bool same_csv = slurp(scratch / "run0" / "report.csv") == slurp(scratch / "run1" / "report.csv");
    const bool same_log = logs[0] == logs[1];
    std::ostringstream t;
    t << "verify --seed 7 twice: exit codes " << codes[0] << ',' << codes[1]
      << ", report.txt identical=" << (same_text ? "yes" : "no") << ", report.csv identical=" << (same_csv ? "yes" : "no")
      << ", stdout identical=" << (same_log ? "yes" : "no");
    record(13, codes[0] == 0 && codes[1] == 0 && same_text && same_csv && same_log, t.str());
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> known;
    fs::path scratch = fs::temp_directory_path() / "fracctl_acceptance";
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--known-failure" && i + 1 < argc) {
            known.insert(std::stoi(argv[++i]));
        } else if (arg == "--scratch" && i + 1 < argc) {
            scratch = argv[++i];
        } else {
            std::cerr << "usage: fracctl_acceptance [--known-failure N]... [--scratch DIR]\n";
            return 2;
        }
    }
    fs::remove_all(scratch);
    fs::create_directories(scratch);

    VerifyConfig config;
    config.seed = 7;
    config.suites = {Suite::estimate, Suite::derivative, Suite::lipschitz, Suite::optimality};
    const Problem benchmark(benchmark_spec());
    OptimOptions options;
    options.seed = 7;
    const VerifyReport report = run_verify(config, benchmark, options);

    criterion_1();
    criterion_2();
    criteria_3_4();
    criterion_5(report);
    criterion_6(report);
    criterion_7(report);
    criterion_8(report);
    criterion_9();
    criterion_10(report);
    criterion_11(report);
    criterion_12(report);
    criterion_13(scratch);

    int passed = 0;
    int unexpected = 0;
    for (const auto& o : outcomes) {
        passed += o.ok ? 1 : 0;
        if (o.ok == (known.count(o.id) != 0)) ++unexpected;
    }
    std::printf("summary: %d/%zu criteria pass; %d outcome(s) differ from the declared known failures\n", passed,
                outcomes.size(), unexpected);
    return unexpected == 0 ? 0 : 1;
}
