#include <ostream>

#include "fracctl/error.hpp"
#include "fracctl/io.hpp"
#include "fracctl/verify.hpp"

namespace fracctl {

const char* to_string(CheckStatus status) noexcept {
    switch (status) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::fail: return "fail";
        case CheckStatus::report: return "report";
    }
    return "unknown";
}

void VerifyReport::expect(std::string name, std::string claim, bool ok, double measured,
                          double threshold, std::string detail) {
    checks_.push_back({std::move(name), std::move(claim), ok ? CheckStatus::pass : CheckStatus::fail,
                       measured, threshold, std::move(detail)});
}

void VerifyReport::note(std::string name, std::string claim, double measured, double threshold,
                        std::string detail) {
    checks_.push_back({std::move(name), std::move(claim), CheckStatus::report, measured, threshold,
                       std::move(detail)});
}

void VerifyReport::describe(std::string instance) { instances_.push_back(std::move(instance)); }

void VerifyReport::merge(const VerifyReport& other) {
    checks_.insert(checks_.end(), other.checks_.begin(), other.checks_.end());
    instances_.insert(instances_.end(), other.instances_.begin(), other.instances_.end());
}

bool VerifyReport::passed() const { return failures() == 0; }

std::size_t VerifyReport::failures() const {
    std::size_t out = 0;
    for (const auto& c : checks_) out += c.status == CheckStatus::fail ? 1 : 0;
    return out;
}

const CheckResult* VerifyReport::find(const std::string& name) const {
    for (const auto& c : checks_) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

void write_report_text(std::ostream& out, const VerifyReport& report) {
    out << "# fracctl verification report\n";
    out << "overall = " << (report.passed() ? "pass" : "fail") << '\n';
    out << "checks = " << report.checks().size() << '\n';
    out << "failures = " << report.failures() << '\n';
    for (const auto& instance : report.instances()) out << "instance = " << instance << '\n';
    for (const auto& c : report.checks()) {
        out << '[' << to_string(c.status) << "] " << c.name << " | claim=" << c.claim
            << " | measured=" << format_double(c.measured)
            << " | threshold=" << format_double(c.threshold);
        if (!c.detail.empty()) out << " | " << c.detail;
        out << '\n';
    }
}

void write_report_csv(std::ostream& out, const VerifyReport& report) {
    out << "check,claim,value,threshold,status\n";
    for (const auto& c : report.checks()) {
        out << c.name << ',' << c.claim << ',' << format_double(c.measured) << ','
            << format_double(c.threshold) << ',' << to_string(c.status) << '\n';
    }
}

const std::vector<Claim>& claim_registry() {
    static const std::vector<Claim> claims = {
        {"operator-weights", "centered-difference weights and normalization constant"},
        {"operator-structure", "symmetric positive-definite M-matrix realization"},
        {"operator-consistency", "closed-form profile reproduced under refinement"},
        {"operator-oracle", "agreement with the singular-integral quadrature"},
        {"bilinear-form", "operator pairing equals the discrete bilinear form"},
        {"dual-norm", "negative-order norm realized as a supremum"},
        {"state-nonnegativity", "nonnegative initial data give nonnegative states"},
        {"state-linf-bound", "sup-norm growth of the state bounded by e^{theta t}"},
        {"shifted-energy", "energy estimates of the shifted system"},
        {"sourced-energy", "energy estimates of the sourced system"},
        {"state-l2-bound", "sup-in-time L2 bound of the state"},
        {"w-norm-estimate", "W(0,T;V) estimates carrying the domain constant"},
        {"adjoint-linf-bound", "sup-norm bound of the adjoint"},
        {"adjoint-w-estimate", "W(0,T;V) estimate of the adjoint"},
        {"sensitivity-derivative", "linearized system is the derivative of the state map"},
        {"sensitivity-bound", "bound of the linearized state"},
        {"second-order-system", "second-order system is the derivative of the sensitivity"},
        {"gradient-formula", "gradient alpha v + rho q matches the cost derivative"},
        {"duality-identity", "terminal pairing equals the window pairing of rho q"},
        {"hessian-formula", "Hessian form matches second differences and is symmetric"},
        {"state-lipschitz", "Lipschitz continuity of the control-to-state map"},
        {"adjoint-lipschitz", "Lipschitz continuity of the control-to-adjoint map"},
        {"existence", "a minimizer candidate is computed"},
        {"first-order", "variational inequality and projection formula"},
        {"active-set", "strongly active set and critical cone structure"},
        {"second-order-necessary", "Hessian nonnegative on the critical cone"},
        {"second-order-sufficient", "Hessian coercive on the tau-critical cone"},
        {"smallness-condition", "data smallness implying coercivity"},
        {"quadratic-growth", "local quadratic growth of the cost"},
        {"uniqueness-condition", "data smallness implying uniqueness"},
        {"local-uniqueness", "all starts converge to the same control"},
    };
    return claims;
}

const char* to_string(Suite suite) noexcept {
    switch (suite) {
        case Suite::operator_: return "operator";
        case Suite::maximum_principle: return "maximum_principle";
        case Suite::estimate: return "estimate";
        case Suite::derivative: return "derivative";
        case Suite::lipschitz: return "lipschitz";
        case Suite::optimality: return "optimality";
    }
    return "unknown";
}

bool parse_suite(const std::string& name, Suite& suite) {
    for (Suite s : all_suites()) {
        if (name == to_string(s)) {
            suite = s;
            return true;
        }
    }
    return false;
}

std::set<Suite> all_suites() {
    return {Suite::operator_, Suite::maximum_principle, Suite::estimate,
            Suite::derivative, Suite::lipschitz,        Suite::optimality};
}

ProblemSpec benchmark_spec(std::size_t n, std::size_t nt) {
    Grid grid(-1.0, 1.0, n, 0.5, nt, -0.5, 0.5);
    const Vector x = grid.nodes();
    const Vector profile = (1.0 - x.array().square()).max(0.0).matrix();
    return ProblemSpec{grid, 0.5, 1.0, Box{-1.0, 1.0}, 0.1 * profile, 0.05 * profile, 1};
}

VerifyReport run_verify(const VerifyConfig& config, const Problem& problem,
                        const OptimOptions& options) {
    VerifyReport report;
    // Fixed order keeps reports byte-identical for a given seed.
    for (Suite suite : config.suites) {
        switch (suite) {
            case Suite::operator_:
                report.merge(run_operator_suite(config.seed));
                break;
            case Suite::maximum_principle:
                report.merge(run_maximum_principle_suite(config.seed, config.maximum_principle_cases,
                                                         config.maximum_principle_nodes,
                                                         config.maximum_principle_steps));
                break;
            case Suite::estimate:
                report.merge(run_estimate_suite(config.seed, config.estimate_cases));
                break;
            case Suite::derivative:
                report.merge(run_derivative_suite(config.seed, config.derivative_cases));
                break;
            case Suite::lipschitz:
                report.merge(run_lipschitz_suite(config.seed, config.lipschitz_pairs));
                break;
            case Suite::optimality:
                report.merge(run_optimality_suite(problem, options, config));
                break;
        }
    }
    return report;
}

}  // namespace fracctl
