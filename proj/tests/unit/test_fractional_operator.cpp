#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "fracctl/error.hpp"
#include "fracctl/fractional_operator.hpp"
#include "fracctl/quadrature_oracle.hpp"

using namespace fracctl;

// Reference values below were computed with mpmath at 30 digits.

TEST(Weights, HalfOrderClosedForm) {
    const Vector g = assemble_weights(0.5, 6);
    const double pi = std::numbers::pi;
    for (int k = 0; k < 6; ++k) {
        const double expected = 4.0 / pi / ((1.0 - 2.0 * k) * (1.0 + 2.0 * k));
        EXPECT_NEAR(g[k], expected, 1e-14) << "k = " << k;
    }
}

TEST(Weights, MatchHighPrecisionReference) {
    const Vector g = assemble_weights(0.3, 5);
    const double reference[5] = {1.1093318013762441396, -0.25599964647144095529, -0.077912935882612464653,
                                 -0.040136966969830663609, -0.025202281585707625987};
    for (int k = 0; k < 5; ++k) EXPECT_NEAR(g[k], reference[k], 2e-15);
}

TEST(Weights, SecondOrderLimit) {
    const Vector g = centered_difference_weights(1.0, 4);
    EXPECT_NEAR(g[0], 2.0, 1e-14);
    EXPECT_NEAR(g[1], -1.0, 1e-14);
    EXPECT_NEAR(g[2], 0.0, 1e-14);
}

TEST(Weights, RejectOrderOutsideUnitInterval) {
    EXPECT_THROW(assemble_weights(0.0, 4), Error);
    EXPECT_THROW(assemble_weights(1.0, 4), Error);
    EXPECT_THROW(assemble_weights(std::nan(""), 4), Error);
}

TEST(Normalization, ReferenceValues) {
    EXPECT_NEAR(normalization_constant(0.5), 1.0 / std::numbers::pi, 1e-15);
    EXPECT_NEAR(normalization_constant(0.3), 0.23009638168163210465, 1e-15);
    EXPECT_NEAR(bump_profile_constant(0.3), 0.89351534928769026144, 1e-15);
    EXPECT_NEAR(bump_profile_constant(0.5), 1.0, 1e-15);
}

TEST(Operator, SymmetricPositiveDefiniteMMatrix) {
    for (double s : {0.2, 0.5, 0.8}) {
        const Grid grid = Grid::full_window(-1.0, 1.0, 40, 1.0, 10);
        const FractionalOperator op(grid, s);
        const Matrix& A = op.dense();
        EXPECT_EQ((A - A.transpose()).cwiseAbs().maxCoeff(), 0.0);
        Eigen::SelfAdjointEigenSolver<Matrix> eig(A);
        EXPECT_GT(eig.eigenvalues().minCoeff(), 0.0);
        for (Eigen::Index i = 0; i < A.rows(); ++i) {
            EXPECT_GE(A.row(i).sum(), 0.0);
            for (Eigen::Index j = 0; j < A.cols(); ++j) {
                if (i != j) EXPECT_LT(A(i, j), 0.0);
            }
        }
    }
}

TEST(Operator, EigenvaluesMatchNumpyReference) {
    // numpy.linalg.eigvalsh on the same Toeplitz matrix.
    const Grid g15 = Grid::full_window(-1.0, 1.0, 15, 1.0, 10);
    Eigen::SelfAdjointEigenSolver<Matrix> e15(FractionalOperator(g15, 0.5).dense());
    EXPECT_NEAR(e15.eigenvalues()[0], 1.1906006749416285, 1e-12);
    EXPECT_NEAR(e15.eigenvalues()[1], 2.813774859322481, 1e-12);
    EXPECT_NEAR(e15.eigenvalues()[14], 15.921172515435735, 1e-11);

    const Grid g31 = Grid::full_window(-1.0, 1.0, 31, 1.0, 10);
    Eigen::SelfAdjointEigenSolver<Matrix> e31(FractionalOperator(g31, 0.25).dense());
    EXPECT_NEAR(e31.eigenvalues()[0], 0.980745281574629, 1e-12);
    EXPECT_NEAR(e31.eigenvalues()[30], 5.65338422601331, 1e-11);
}

TEST(Operator, ToeplitzProductSolveAndForm) {
    const Grid grid = Grid::full_window(-1.0, 1.0, 33, 1.0, 10);
    const FractionalOperator op(grid, 0.35);
    Vector u = Vector::LinSpaced(33, -1.0, 2.0).array().sin();
    Vector v = Vector::LinSpaced(33, 0.0, 3.0).array().cos();
    EXPECT_LT((op.apply(u) - op.apply_toeplitz(u)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((op.apply(op.solve(u)) - u).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(op.form(u, v), op.form(v, u), 1e-13);
    EXPECT_NEAR(op.form(u, v), grid.dx() * u.dot(op.apply(v)), 1e-13);
}

TEST(Operator, BumpProfileConvergesUnderRefinement) {
    double previous = 1e9;
    for (std::size_t n : {63u, 127u, 255u}) {
        const Grid grid = Grid::full_window(-1.0, 1.0, n, 1.0, 10);
        const FractionalOperator op(grid, 0.5);
        Vector u(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) u[static_cast<Eigen::Index>(i)] = std::sqrt(1.0 - std::pow(grid.node(i), 2));
        const Vector Au = op.apply(u);
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs(grid.node(i)) <= 0.5) err = std::max(err, std::abs(Au[static_cast<Eigen::Index>(i)] - 1.0));
        }
        EXPECT_LT(err, previous);
        previous = err;
    }
    EXPECT_LT(previous, 1e-3);
}

TEST(QuadratureOracle, ClosedFormBump) {
    const double s = 0.3;
    auto u = [s](double x) { return std::abs(x) < 1.0 ? std::pow(1.0 - x * x, s) : 0.0; };
    EXPECT_NEAR(quadrature_oracle(u, 0.2, s, -1.0, 1.0), 0.89351534928769026143, 1e-3);
}

TEST(QuadratureOracle, SmoothCompactProfileMatchesMpmath) {
    auto u = [](double x) { return std::abs(x) < 1.0 ? std::exp(-x * x) * std::pow(1.0 - x * x, 2) : 0.0; };
    EXPECT_NEAR(quadrature_oracle(u, 0.3, 0.4, -1.0, 1.0), 1.0233987844064883385, 1e-6);
    EXPECT_NEAR(quadrature_oracle(u, 0.0, 0.4, -1.0, 1.0), 1.677589105273725184, 1e-6);
}
