#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "fracctl/fractional_operator.hpp"
#include "fracctl/io.hpp"
#include "fracctl/norms.hpp"
#include "fracctl/quadrature_oracle.hpp"
#include "fracctl/verify.hpp"

namespace fracctl {
namespace {

// Nodes closer to the boundary than this fraction of |Omega| are skipped in
// the closed-form comparison (the profile is singular there).
constexpr double kBoundaryBand = 0.1;

double profile_error(double s, std::size_t n, double half_width) {
    const Grid grid = Grid::full_window(-1.0, 1.0, n, 1.0, 1);
    const FractionalOperator op(grid, s);
    const Vector x = grid.nodes();
    const Vector u = (1.0 - x.array().square()).max(0.0).pow(s).matrix();
    const Vector au = op.apply(u);
    const double target = bump_profile_constant(s);
    double err = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (std::abs(x[i]) <= half_width + 1e-12) err = std::max(err, std::abs(au[i] - target));
    }
    return err;
}

std::string join(const std::vector<double>& values) {
    std::ostringstream out;
    for (std::size_t i = 0; i < values.size(); ++i) out << (i ? " " : "") << format_double(values[i]);
    return out.str();
}

bool strictly_decreasing(const std::vector<double>& values) {
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (!(values[i] < values[i - 1])) return false;
    }
    return true;
}

}  // namespace

VerifyReport run_operator_suite(std::uint64_t seed) {
    VerifyReport report;
    report.describe("operator: Omega=(-1,1), fractional centered differences, zero exterior");
    std::mt19937_64 rng(seed);

    {
        const Vector g = assemble_weights(0.5, 3);
        const double pi = std::numbers::pi;
        const double err = std::max({std::abs(g[0] - 4.0 / pi), std::abs(g[1] + 4.0 / (3.0 * pi)),
                                     std::abs(g[2] + 4.0 / (15.0 * pi))});
        report.expect("weights_s0.5_exact", "operator-weights", err <= 1e-14, err, 1e-14);
        const double c_err = std::abs(normalization_constant(0.5) - 1.0 / pi);
        report.expect("normalization_constant_s0.5", "operator-weights", c_err <= 1e-14, c_err, 1e-14);
        const Vector g1 = centered_difference_weights(1.0, 4);
        const double stencil_err =
            std::max({std::abs(g1[0] - 2.0), std::abs(g1[1] + 1.0), std::abs(g1[2]), std::abs(g1[3])});
        report.expect("weights_s1_three_point_stencil", "operator-weights", stencil_err <= 1e-14,
                      stencil_err, 1e-14);
    }

    {
        std::uniform_real_distribution<double> order(0.0, 1.0);
        std::size_t bad = 0;
        for (int trial = 0; trial < 1000; ++trial) {
            double s = order(rng);
            while (s <= 0.0) s = order(rng);
            const Vector g = assemble_weights(s, 201);
            if (!(g[0] > 0.0) || (g.tail(200).array() >= 0.0).any()) ++bad;
        }
        report.expect("weights_sign_pattern_1000_orders", "operator-weights", bad == 0,
                      static_cast<double>(bad), 0.0);
    }

    {
        double worst_asym = 0.0;
        double min_eig = std::numeric_limits<double>::infinity();
        double worst_offdiag = -std::numeric_limits<double>::infinity();
        double min_row_sum = std::numeric_limits<double>::infinity();
        for (std::size_t n : {1u, 8u, 64u, 256u}) {
            for (double s : {0.25, 0.5, 0.75}) {
                const FractionalOperator op(Grid::full_window(-1.0, 1.0, n, 1.0, 1), s);
                const Matrix& a = op.dense();
                worst_asym = std::max(worst_asym, (a - a.transpose()).cwiseAbs().maxCoeff());
                Eigen::SelfAdjointEigenSolver<Matrix> eig(a, Eigen::EigenvaluesOnly);
                min_eig = std::min(min_eig, eig.eigenvalues().minCoeff() / op.scale());
                min_row_sum = std::min(min_row_sum, a.rowwise().sum().minCoeff());
                if (n > 1) {
                    Matrix off = a;
                    off.diagonal().setConstant(-std::numeric_limits<double>::infinity());
                    worst_offdiag = std::max(worst_offdiag, off.maxCoeff());
                }
            }
        }
        report.expect("operator_symmetric", "operator-structure", worst_asym == 0.0, worst_asym, 0.0);
        report.expect("operator_positive_definite", "operator-structure", min_eig > 0.0, min_eig, 0.0,
                      "min eigenvalue / dx^{-2s}, n in {1,8,64,256}");
        report.expect("operator_offdiagonal_nonpositive", "operator-structure", worst_offdiag < 0.0,
                      worst_offdiag, 0.0);
        report.expect("operator_row_sums_nonnegative", "operator-structure", min_row_sum >= 0.0,
                      min_row_sum, 0.0);
    }

    {
        const double interior = 1.0 - 2.0 * kBoundaryBand;
        for (double s : {0.25, 0.5, 0.75}) {
            std::vector<double> errors;
            for (std::size_t n : {32u, 64u, 128u, 256u}) errors.push_back(profile_error(s, n, interior));
            std::ostringstream name;
            name << "closed_form_refinement_s" << s;
            report.expect(name.str(), "operator-consistency", strictly_decreasing(errors),
                          errors.back(), errors.front(), "errors n=32,64,128,256: " + join(errors));
        }
        const double mid = profile_error(0.5, 256, 0.5);
        report.expect("closed_form_s0.5_n256_middle_half", "operator-consistency", mid <= 1e-3, mid,
                      1e-3);
        report.note("closed_form_s0.5_n256_interior", "operator-consistency",
                    profile_error(0.5, 256, interior), 1e-3, "nodes with |x| <= 0.8");

        auto bump = [](double x) { return std::sqrt(std::max(0.0, 1.0 - x * x)); };
        const double oracle = quadrature_oracle(bump, 0.0, 0.5, -1.0, 1.0, {.cutoff = 1e-3});
        report.expect("oracle_closed_form_s0.5", "operator-oracle", std::abs(oracle - 1.0) <= 1e-3,
                      std::abs(oracle - 1.0), 1e-3);
    }

    {
        auto smooth = [](double x) {
            const double w = std::max(0.0, 1.0 - x * x);
            return std::exp(-x * x) * w * w;
        };
        const std::vector<double> points = {-0.5, -0.25, 0.0, 0.25, 0.5};
        for (double s : {0.25, 0.5, 0.75}) {
            std::vector<double> reference;
            for (double x : points) {
                reference.push_back(quadrature_oracle(smooth, x, s, -1.0, 1.0, {.cutoff = 2e-3}));
            }
            std::vector<double> errors;
            for (std::size_t n : {31u, 63u, 127u, 255u}) {
                const Grid grid = Grid::full_window(-1.0, 1.0, n, 1.0, 1);
                const FractionalOperator op(grid, s);
                Vector u(static_cast<Eigen::Index>(n));
                for (std::size_t i = 0; i < n; ++i) u[static_cast<Eigen::Index>(i)] = smooth(grid.node(i));
                const Vector au = op.apply(u);
                double err = 0.0;
                for (std::size_t p = 0; p < points.size(); ++p) {
                    const auto i = static_cast<Eigen::Index>(std::llround((points[p] + 1.0) / grid.dx())) - 1;
                    err = std::max(err, std::abs(au[i] - reference[p]));
                }
                errors.push_back(err);
            }
            std::ostringstream name;
            name << "oracle_agreement_s" << s;
            report.expect(name.str(), "operator-oracle", strictly_decreasing(errors), errors.back(),
                          errors.front(), "errors n=31,63,127,255: " + join(errors));
        }
    }

    {
        std::normal_distribution<double> normal(0.0, 1.0);
        const Grid grid = Grid::full_window(-1.0, 1.0, 64, 1.0, 1);
        const FractionalOperator op(grid, 0.4);
        double worst = 0.0;
        double worst_form = 0.0;
        double worst_toeplitz = 0.0;
        const double a_norm = op.dense().norm();
        for (int trial = 0; trial < 20; ++trial) {
            Vector u(64), v(64);
            for (Eigen::Index i = 0; i < 64; ++i) {
                u[i] = normal(rng);
                v[i] = normal(rng);
            }
            const double gap = std::abs(op.apply(u).dot(v) - u.dot(op.apply(v)));
            worst = std::max(worst, gap / (u.norm() * v.norm() * a_norm));
            const double form_gap = std::abs(op.form(u, v) - grid.dx() * op.apply(u).dot(v));
            worst_form = std::max(worst_form, form_gap / (grid.dx() * u.norm() * v.norm() * a_norm));
            worst_toeplitz = std::max(
                worst_toeplitz, (op.apply(u) - op.apply_toeplitz(u)).norm() / (a_norm * u.norm()));
        }
        report.expect("operator_pairing_symmetric", "bilinear-form", worst <= 1e-12, worst, 1e-12);
        report.expect("form_matches_pairing", "bilinear-form", worst_form <= 1e-12, worst_form, 1e-12);
        report.expect("toeplitz_product_matches_dense", "bilinear-form", worst_toeplitz <= 1e-12,
                      worst_toeplitz, 1e-12);

        Vector f(64);
        for (Eigen::Index i = 0; i < 64; ++i) f[i] = normal(rng);
        const double dual = vstar_norm(op, f);
        double sampled = 0.0;
        for (int trial = 0; trial < 1000; ++trial) {
            Vector u(64);
            for (Eigen::Index i = 0; i < 64; ++i) u[i] = normal(rng);
            sampled = std::max(sampled, grid.dx() * f.dot(u) / v_norm(op, u));
        }
        const Vector maximizer = op.solve(f);
        const double attained = grid.dx() * f.dot(maximizer) / v_norm(op, maximizer);
        report.expect("dual_norm_upper_bound", "dual-norm", sampled <= dual * (1.0 + 1e-12),
                      sampled / dual, 1.0, "max over 1000 random u of pairing / V-norm");
        report.expect("dual_norm_attained", "dual-norm",
                      std::abs(attained - dual) <= 1e-6 * dual, std::abs(attained - dual) / dual, 1e-6,
                      "supremum at u = A^{-1} f");
    }
    return report;
}

}  // namespace fracctl
