#include "fracctl_cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "fracctl/error.hpp"
#include "fracctl/io.hpp"

namespace fracctl::cli {
namespace {

std::string trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = text.find_last_not_of(" \t\r");
    return std::string(text.substr(first, last - first + 1));
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, int line,
                            const char* expected) {
    std::ostringstream msg;
    msg << "line " << line << ": key '" << key << "' expects " << expected << ", got '" << value << "'";
    throw ConfigError(msg.str());
}

double to_double(const std::string& key, const std::string& value, int line) {
    double out = 0.0;
    if (!parse_double(value, out)) bad_value(key, value, line, "a number");
    return out;
}

template <class Int>
Int to_integer(const std::string& key, const std::string& value, int line) {
    Int out{};
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end) bad_value(key, value, line, "a non-negative integer");
    return out;
}

std::pair<double, double> to_interval(const std::string& key, const std::string& value, int line) {
    if (value.size() < 2 || value.front() != '[' || value.back() != ']') {
        bad_value(key, value, line, "an interval [lo, hi]");
    }
    const std::string inner = value.substr(1, value.size() - 2);
    const auto comma = inner.find(',');
    if (comma == std::string::npos) bad_value(key, value, line, "an interval [lo, hi]");
    return {to_double(key, trim(inner.substr(0, comma)), line),
            to_double(key, trim(inner.substr(comma + 1)), line)};
}

std::set<Suite> to_suites(const std::string& key, const std::string& value, int line) {
    std::set<Suite> suites;
    std::stringstream list(value);
    std::string item;
    while (std::getline(list, item, ',')) {
        Suite suite{};
        if (!parse_suite(trim(item), suite)) bad_value(key, value, line, "a comma-separated suite list");
        suites.insert(suite);
    }
    if (suites.empty()) bad_value(key, value, line, "at least one suite");
    return suites;
}

using Setter = std::function<void(RunConfig&, const std::string&, int)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> t;
        auto real = [&t](const std::string& key, double RunConfig::*field) {
            t[key] = [key, field](RunConfig& c, const std::string& v, int l) { c.*field = to_double(key, v, l); };
        };
        auto count = [&t](const std::string& key, std::size_t RunConfig::*field) {
            t[key] = [key, field](RunConfig& c, const std::string& v, int l) {
                c.*field = to_integer<std::size_t>(key, v, l);
            };
        };
        auto text = [&t](const std::string& key, std::string RunConfig::*field) {
            t[key] = [field](RunConfig& c, const std::string& v, int) { c.*field = v; };
        };
        real("problem.a", &RunConfig::a);
        real("problem.b", &RunConfig::b);
        count("problem.n", &RunConfig::n);
        real("problem.s", &RunConfig::s);
        real("problem.T", &RunConfig::T);
        count("problem.nt", &RunConfig::nt);
        t["problem.omega"] = [](RunConfig& c, const std::string& v, int l) {
            std::tie(c.omega_a, c.omega_b) = to_interval("problem.omega", v, l);
        };
        real("problem.alpha", &RunConfig::alpha);
        real("problem.m", &RunConfig::m);
        real("problem.M", &RunConfig::M);
        text("problem.rho0", &RunConfig::rho0);
        text("problem.rhod", &RunConfig::rhod);
        text("control.v", &RunConfig::control);
        text("output.dir", &RunConfig::output_dir);

        t["optimizer.method"] = [](RunConfig& c, const std::string& v, int l) {
            if (v == "projected_gradient") c.method = Method::projected_gradient;
            else if (v == "fixed_point") c.method = Method::fixed_point;
            else bad_value("optimizer.method", v, l, "projected_gradient or fixed_point");
        };
        t["optimizer.max_iters"] = [](RunConfig& c, const std::string& v, int l) {
            c.optimizer.max_iters = to_integer<std::size_t>("optimizer.max_iters", v, l);
        };
        t["optimizer.max_backtracks"] = [](RunConfig& c, const std::string& v, int l) {
            c.optimizer.max_backtracks = to_integer<std::size_t>("optimizer.max_backtracks", v, l);
        };
        t["optimizer.seed"] = [](RunConfig& c, const std::string& v, int l) {
            c.optimizer.seed = to_integer<std::uint64_t>("optimizer.seed", v, l);
        };
        t["optimizer.kkt_tol"] = [](RunConfig& c, const std::string& v, int l) {
            c.optimizer.kkt_tol = to_double("optimizer.kkt_tol", v, l);
        };
        t["optimizer.armijo_c1"] = [](RunConfig& c, const std::string& v, int l) {
            c.optimizer.armijo_c1 = to_double("optimizer.armijo_c1", v, l);
        };
        t["optimizer.backtrack"] = [](RunConfig& c, const std::string& v, int l) {
            c.optimizer.backtrack = to_double("optimizer.backtrack", v, l);
        };
        t["optimizer.initial_step"] = [](RunConfig& c, const std::string& v, int l) {
            if (v == "auto") c.optimizer.initial_step.reset();
            else c.optimizer.initial_step = to_double("optimizer.initial_step", v, l);
        };
        t["optimizer.damping"] = [](RunConfig& c, const std::string& v, int l) {
            c.optimizer.damping = to_double("optimizer.damping", v, l);
        };
        t["optimizer.linear_solver"] = [](RunConfig& c, const std::string& v, int l) {
            if (v == "cholesky") c.optimizer.solver.linear_solver = LinearSolver::cholesky;
            else if (v == "toeplitz_cg") c.optimizer.solver.linear_solver = LinearSolver::toeplitz_cg;
            else bad_value("optimizer.linear_solver", v, l, "cholesky or toeplitz_cg");
        };
        t["optimizer.cg_tolerance"] = [](RunConfig& c, const std::string& v, int l) {
            c.optimizer.solver.cg_tolerance = to_double("optimizer.cg_tolerance", v, l);
        };

        auto verify_count = [&t](const std::string& key, std::size_t VerifyConfig::*field) {
            t[key] = [key, field](RunConfig& c, const std::string& v, int l) {
                c.verify.*field = to_integer<std::size_t>(key, v, l);
            };
        };
        auto verify_real = [&t](const std::string& key, double VerifyConfig::*field) {
            t[key] = [key, field](RunConfig& c, const std::string& v, int l) {
                c.verify.*field = to_double(key, v, l);
            };
        };
        t["verify.seed"] = [](RunConfig& c, const std::string& v, int l) {
            c.verify.seed = to_integer<std::uint64_t>("verify.seed", v, l);
        };
        t["verify.suites"] = [](RunConfig& c, const std::string& v, int l) {
            c.verify.suites = to_suites("verify.suites", v, l);
        };
        verify_count("verify.maximum_principle_cases", &VerifyConfig::maximum_principle_cases);
        verify_count("verify.maximum_principle_nodes", &VerifyConfig::maximum_principle_nodes);
        verify_count("verify.maximum_principle_steps", &VerifyConfig::maximum_principle_steps);
        verify_count("verify.estimate_cases", &VerifyConfig::estimate_cases);
        verify_count("verify.derivative_cases", &VerifyConfig::derivative_cases);
        verify_count("verify.lipschitz_pairs", &VerifyConfig::lipschitz_pairs);
        verify_count("verify.coercivity_samples", &VerifyConfig::coercivity_samples);
        verify_count("verify.variational_samples", &VerifyConfig::variational_samples);
        verify_count("verify.growth_samples", &VerifyConfig::growth_samples);
        verify_count("verify.multistart", &VerifyConfig::multistart);
        verify_real("verify.ssc_tau", &VerifyConfig::ssc_tau);
        verify_real("verify.domain_constant", &VerifyConfig::domain_constant);
        verify_real("verify.kkt_tol", &VerifyConfig::kkt_tol);
        return t;
    }();
    return table;
}

Vector bump(const Grid& grid, double amplitude) {
    Vector out(static_cast<Eigen::Index>(grid.n()));
    const double a = grid.a();
    const double b = grid.b();
    for (std::size_t i = 0; i < grid.n(); ++i) {
        const double xi = (2.0 * grid.node(i) - a - b) / (b - a);
        out[static_cast<Eigen::Index>(i)] = amplitude * std::max(0.0, 1.0 - xi * xi);
    }
    return out;
}

Vector eigenvector(const Grid& grid, double s, std::size_t k, double amplitude) {
    if (k < 1 || k > grid.n()) {
        throw ConfigError("profile eigen(k): k must lie in [1, n], got " + std::to_string(k));
    }
    const FractionalOperator op(grid, s);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(op.dense());
    Vector v = solver.eigenvectors().col(static_cast<Eigen::Index>(k - 1));
    Eigen::Index pivot = 0;
    v.cwiseAbs().maxCoeff(&pivot);
    if (v[pivot] < 0.0) v = -v;
    return amplitude * v / v.cwiseAbs().maxCoeff();
}

double profile_number(const ProfileCall& call, std::size_t index) {
    double value = 0.0;
    if (index >= call.args.size() || !parse_double(call.args[index], value)) {
        throw ConfigError("profile " + call.name + ": argument " + std::to_string(index + 1) +
                          " must be a number");
    }
    return value;
}

void expect_args(const ProfileCall& call, std::size_t lo, std::size_t hi) {
    if (call.args.size() < lo || call.args.size() > hi) {
        throw ConfigError("profile " + call.name + ": wrong number of arguments");
    }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& path) {
    const std::filesystem::path p(path);
    return p.is_absolute() ? p : base / p;
}

Vector build_data(const std::string& profile, const Grid& grid, double s,
                  const std::filesystem::path& base_dir) {
    const ProfileCall call = parse_profile(profile);
    if (call.name == "zero") {
        expect_args(call, 0, 0);
        return Vector::Zero(static_cast<Eigen::Index>(grid.n()));
    }
    if (call.name == "constant") {
        expect_args(call, 1, 1);
        return Vector::Constant(static_cast<Eigen::Index>(grid.n()), profile_number(call, 0));
    }
    if (call.name == "bump") {
        expect_args(call, 1, 1);
        return bump(grid, profile_number(call, 0));
    }
    if (call.name == "eigen") {
        expect_args(call, 1, 2);
        const double k = profile_number(call, 0);
        if (k < 1.0 || k != std::floor(k)) throw ConfigError("profile eigen(k): k must be a positive integer");
        const double amplitude = call.args.size() == 2 ? profile_number(call, 1) : 1.0;
        return eigenvector(grid, s, static_cast<std::size_t>(k), amplitude);
    }
    if (call.name == "csv") {
        expect_args(call, 1, 1);
        std::ifstream in(resolve(base_dir, call.args[0]));
        if (!in) throw ConfigError("profile csv: cannot open '" + call.args[0] + "'");
        try {
            return read_vector_csv(in, grid);
        } catch (const Error& e) {
            throw ConfigError("profile csv('" + call.args[0] + "'): " + e.what());
        }
    }
    throw ConfigError("unknown profile '" + call.name + "'");
}

}  // namespace

ProfileCall parse_profile(const std::string& text) {
    const std::string body = trim(text);
    ProfileCall call;
    const auto open = body.find('(');
    if (open == std::string::npos) {
        call.name = body;
    } else {
        if (body.back() != ')') throw ConfigError("malformed profile '" + body + "'");
        call.name = trim(body.substr(0, open));
        const std::string args = body.substr(open + 1, body.size() - open - 2);
        std::stringstream list(args);
        std::string item;
        while (std::getline(list, item, ',')) call.args.push_back(trim(item));
        if (!args.empty() && args.back() == ',') throw ConfigError("malformed profile '" + body + "'");
    }
    if (call.name.empty()) throw ConfigError("empty profile");
    return call;
}

RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
    RunConfig config;
    config.base_dir = base_dir;
    std::set<std::string> seen;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string content = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (content.empty()) continue;
        const auto eq = content.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line) + ": expected 'key = value'");
        }
        const std::string key = trim(content.substr(0, eq));
        const std::string value = trim(content.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) {
            throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "'");
        }
        if (!seen.insert(key).second) {
            throw ConfigError("line " + std::to_string(line) + ": duplicate key '" + key + "'");
        }
        if (value.empty()) {
            throw ConfigError("line " + std::to_string(line) + ": key '" + key + "' has no value");
        }
        it->second(config, value, line);
    }
    try {
        config.optimizer.validate();
    } catch (const Error& e) {
        throw ConfigError(std::string("optimizer: ") + e.what());
    }
    return config;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    return parse_config(in, path.has_parent_path() ? path.parent_path() : std::filesystem::path("."));
}

void write_config(std::ostream& out, const RunConfig& c) {
    auto num = [](double v) { return format_double(v); };
    out << "problem.a = " << num(c.a) << '\n'
        << "problem.b = " << num(c.b) << '\n'
        << "problem.n = " << c.n << '\n'
        << "problem.s = " << num(c.s) << '\n'
        << "problem.T = " << num(c.T) << '\n'
        << "problem.nt = " << c.nt << '\n'
        << "problem.omega = [" << num(c.omega_a) << ", " << num(c.omega_b) << "]\n"
        << "problem.alpha = " << num(c.alpha) << '\n'
        << "problem.m = " << num(c.m) << '\n'
        << "problem.M = " << num(c.M) << '\n'
        << "problem.rho0 = " << c.rho0 << '\n'
        << "problem.rhod = " << c.rhod << '\n'
        << "control.v = " << c.control << '\n'
        << "output.dir = " << c.output_dir << '\n';
    const OptimOptions& o = c.optimizer;
    out << "optimizer.method = "
        << (c.method == Method::projected_gradient ? "projected_gradient" : "fixed_point") << '\n'
        << "optimizer.max_iters = " << o.max_iters << '\n'
        << "optimizer.kkt_tol = " << num(o.kkt_tol) << '\n'
        << "optimizer.armijo_c1 = " << num(o.armijo_c1) << '\n'
        << "optimizer.backtrack = " << num(o.backtrack) << '\n'
        << "optimizer.initial_step = " << (o.initial_step ? num(*o.initial_step) : std::string("auto")) << '\n'
        << "optimizer.max_backtracks = " << o.max_backtracks << '\n'
        << "optimizer.damping = " << num(o.damping) << '\n'
        << "optimizer.seed = " << o.seed << '\n'
        << "optimizer.linear_solver = "
        << (o.solver.linear_solver == LinearSolver::cholesky ? "cholesky" : "toeplitz_cg") << '\n'
        << "optimizer.cg_tolerance = " << num(o.solver.cg_tolerance) << '\n';
    const VerifyConfig& v = c.verify;
    out << "verify.seed = " << v.seed << '\n' << "verify.suites = ";
    bool first = true;
    for (Suite suite : v.suites) {
        out << (first ? "" : ",") << to_string(suite);
        first = false;
    }
    out << '\n'
        << "verify.maximum_principle_cases = " << v.maximum_principle_cases << '\n'
        << "verify.maximum_principle_nodes = " << v.maximum_principle_nodes << '\n'
        << "verify.maximum_principle_steps = " << v.maximum_principle_steps << '\n'
        << "verify.estimate_cases = " << v.estimate_cases << '\n'
        << "verify.derivative_cases = " << v.derivative_cases << '\n'
        << "verify.lipschitz_pairs = " << v.lipschitz_pairs << '\n'
        << "verify.coercivity_samples = " << v.coercivity_samples << '\n'
        << "verify.variational_samples = " << v.variational_samples << '\n'
        << "verify.growth_samples = " << v.growth_samples << '\n'
        << "verify.multistart = " << v.multistart << '\n'
        << "verify.ssc_tau = " << num(v.ssc_tau) << '\n'
        << "verify.domain_constant = " << num(v.domain_constant) << '\n'
        << "verify.kkt_tol = " << num(v.kkt_tol) << '\n';
}

RunConfig config_from_spec(const ProblemSpec& spec, const std::filesystem::path& data_dir) {
    std::filesystem::create_directories(data_dir);
    RunConfig c;
    c.base_dir = data_dir;
    const Grid& g = spec.grid;
    c.a = g.a();
    c.b = g.b();
    c.n = g.n();
    c.s = spec.s;
    c.T = g.horizon();
    c.nt = g.nt();
    c.omega_a = g.omega_a();
    c.omega_b = g.omega_b();
    c.alpha = spec.alpha;
    c.m = spec.box.lower;
    c.M = spec.box.upper;
    {
        std::ofstream out(data_dir / "rho0.csv");
        write_vector_csv(out, g, spec.rho0);
    }
    {
        std::ofstream out(data_dir / "rhod.csv");
        write_vector_csv(out, g, spec.rhod);
    }
    c.rho0 = "csv(rho0.csv)";
    c.rhod = "csv(rhod.csv)";
    return c;
}

Grid build_grid(const RunConfig& c) {
    try {
        return Grid(c.a, c.b, c.n, c.T, c.nt, c.omega_a, c.omega_b);
    } catch (const Error& e) {
        throw ConfigError(std::string("problem: ") + e.what());
    }
}

ProblemSpec build_problem(const RunConfig& c) {
    const Grid grid = build_grid(c);
    if (!(c.s > 0.0 && c.s < 1.0)) throw ConfigError("problem.s must lie in (0, 1)");
    ProblemSpec spec{grid,
                     c.s,
                     c.alpha,
                     Box{c.m, c.M},
                     build_data(c.rho0, grid, c.s, c.base_dir),
                     build_data(c.rhod, grid, c.s, c.base_dir),
                     1};
    try {
        spec.validate();
    } catch (const Error& e) {
        throw ConfigError(std::string("problem: ") + e.what());
    }
    return spec;
}

ControlField build_control(const std::string& profile, const Grid& grid,
                           const std::filesystem::path& base_dir) {
    const ProfileCall call = parse_profile(profile);
    if (call.name == "zero") {
        expect_args(call, 0, 0);
        return ControlField(grid);
    }
    if (call.name == "constant") {
        expect_args(call, 1, 1);
        return ControlField::constant(grid, profile_number(call, 0));
    }
    if (call.name == "bump") {
        expect_args(call, 1, 1);
        const Vector spatial = bump(grid, profile_number(call, 0));
        ControlField out(grid);
        const auto& nodes = grid.window_nodes();
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            out.values().row(static_cast<Eigen::Index>(j)).setConstant(spatial[static_cast<Eigen::Index>(nodes[j])]);
        }
        return out;
    }
    if (call.name == "csv") {
        expect_args(call, 1, 1);
        std::ifstream in(resolve(base_dir, call.args[0]));
        if (!in) throw ConfigError("control csv: cannot open '" + call.args[0] + "'");
        try {
            return read_control_csv(in, grid);
        } catch (const Error& e) {
            throw ConfigError("control csv('" + call.args[0] + "'): " + e.what());
        }
    }
    throw ConfigError("unknown control profile '" + call.name + "'");
}

}  // namespace fracctl::cli
