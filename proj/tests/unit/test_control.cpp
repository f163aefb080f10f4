#include <gtest/gtest.h>

#include <cmath>

#include "fracctl/control.hpp"
#include "fracctl/error.hpp"
#include "fracctl/norms.hpp"
#include "fracctl/pde_solvers.hpp"
#include "fracctl/verify.hpp"
#include "support.hpp"

using namespace fracctl;

TEST(Cost, SplitsIntoTrackingAndRegularization) {
    const Problem problem(test::small_spec());
    const ControlField v = test::random_field(problem.grid(), 1);
    const ControlPoint point(problem, v, ControlPoint::Depth::cost);
    const TimeField rho = solve_state(problem, v);
    const double tracking = 0.5 * std::pow(l2_norm(problem.grid().dx(), rho[problem.grid().nt()] - problem.rhod()), 2);
    EXPECT_NEAR(point.tracking(), tracking, 1e-15);
    EXPECT_NEAR(point.regularization(), 0.5 * std::pow(l2_norm(problem.grid(), v), 2), 1e-15);
    EXPECT_DOUBLE_EQ(cost(problem, v), point.cost());
}

TEST(Gradient, MatchesCentralDifferences) {
    const Problem problem(test::small_spec());
    const ControlField v = test::random_field(problem.grid(), 2);
    const ControlField w = test::random_field(problem.grid(), 3, -1.0, 1.0);
    const ControlPoint point(problem, v);
    const double eps = 1e-5;
    const double fd = (cost(problem, v + eps * w) - cost(problem, v - eps * w)) / (2.0 * eps);
    EXPECT_NEAR(point.derivative(w), fd, 1e-7 * std::abs(fd));
}

TEST(Gradient, ZeroInitialStateGivesRegularizationOnly) {
    ProblemSpec spec = test::small_spec();
    spec.rho0.setZero();
    const Problem problem(spec);
    const ControlField v = test::random_field(problem.grid(), 4);
    const GradientResult g = gradient(problem, v);
    EXPECT_EQ(g.gradient, problem.alpha() * v);
}

TEST(Hessian, SymmetricAndMatchesSecondDifference) {
    const Problem problem(test::small_spec());
    const ControlField u = test::random_field(problem.grid(), 5);
    const ControlField w = test::random_field(problem.grid(), 6, -1.0, 1.0);
    const ControlField d = test::random_field(problem.grid(), 7, -1.0, 1.0);
    const ControlPoint point(problem, u);
    EXPECT_NEAR(point.hessian(w, d), point.hessian(d, w), 1e-13 * std::abs(point.hessian(w, d)));
    const double h = 1e-3;
    const double fd = (cost(problem, u + h * w) - 2.0 * point.cost() + cost(problem, u - h * w)) / (h * h);
    EXPECT_NEAR(point.hessian(w, w), fd, 1e-5 * std::abs(fd));
    EXPECT_DOUBLE_EQ(hessian_bilinear(problem, u, w, d), point.hessian(w, d));
}

TEST(Projection, ClipsToBox) {
    const Grid grid(-1.0, 1.0, 5, 1.0, 2, -0.9, 0.9);
    ControlField raw = ControlField::constant(grid, 0.0);
    raw.values()(0, 0) = 5.0;
    raw.values()(1, 1) = -5.0;
    const ControlField p = project(Box{-1.0, 2.0}, raw);
    EXPECT_EQ(p.values()(0, 0), 2.0);
    EXPECT_EQ(p.values()(1, 1), -1.0);
    EXPECT_EQ(p.values()(2, 0), 0.0);
}

TEST(CriticalCone, InteriorControlWithEmptyActiveSetIsIdentity) {
    const Grid grid(-1.0, 1.0, 5, 1.0, 3, -0.9, 0.9);
    const ControlField u = ControlField::constant(grid, 0.1);
    const ControlField g(grid);
    const ControlField v = test::random_field(grid, 8, -1.0, 1.0);
    EXPECT_EQ(critical_cone_project(Box{-1.0, 1.0}, u, g, 0.0, v), v);
}

TEST(CriticalCone, LowerBoundKeepsNonnegativePart) {
    const Grid grid(-1.0, 1.0, 5, 1.0, 3, -0.9, 0.9);
    const ControlField u = ControlField::constant(grid, -1.0);
    const ControlField g(grid);
    const ControlField v = ControlField::constant(grid, -1.0);
    EXPECT_EQ(critical_cone_project(Box{-1.0, 1.0}, u, g, 0.0, v).sup_norm(), 0.0);
}

TEST(CriticalCone, StronglyActivePointsAreZeroed) {
    const Grid grid(-1.0, 1.0, 5, 1.0, 3, -0.9, 0.9);
    const ControlField u = ControlField::constant(grid, 1.0);
    ControlField g(grid);
    g.values()(0, 0) = -0.5;
    const ControlField v = ControlField::constant(grid, -0.25);
    const ControlField out = critical_cone_project(Box{-1.0, 1.0}, u, g, 0.1, v);
    EXPECT_EQ(out.values()(0, 0), 0.0);
    EXPECT_EQ(out.values()(1, 0), -0.25);
    const ControlMask a = active_set(g, 0.1);
    EXPECT_EQ(a.count(), 1);
}

TEST(KKT, ResidualZeroAtProjectionFixedPoint) {
    ProblemSpec spec = test::small_spec();
    spec.rho0.setZero();
    const Problem problem(spec);
    const KKTReport report = kkt_residual(problem, ControlField(problem.grid()));
    EXPECT_EQ(report.residual, 0.0);
    EXPECT_EQ(report.violations, 0);
    EXPECT_EQ(report.inactive.count(), report.inactive.size());
}

TEST(KKT, SignViolationsAreCounted) {
    const Problem problem(test::small_spec());
    const ControlField u = ControlField::constant(problem.grid(), 0.5);
    const KKTReport report = kkt_residual(problem, u);
    EXPECT_GT(report.residual, 0.0);
    EXPECT_EQ(report.violations, report.inactive.size() - report.inactive.count());
}

TEST(Conditions, BenchmarkEvaluations) {
    const ProblemSpec spec = benchmark_spec();
    const UniquenessCondition u = uniqueness_condition(spec);
    EXPECT_NEAR(u.lhs, 0.16806334013767743085, 1e-14);  // 3 e^{1.5} (0.1^2 + 0.05^2)
    EXPECT_TRUE(u.holds);
    EXPECT_NEAR(u.margin, 1.0 - u.lhs, 1e-15);
    const SmallnessCondition s = ssc_smallness(spec, 0.0);
    EXPECT_NEAR(s.lhs, 0.24464536456131407118, 1e-14);  // 6 e (0.1 + 0.05) 0.1
    EXPECT_DOUBLE_EQ(s.rhs, 0.5);
    EXPECT_TRUE(s.holds);
    EXPECT_FALSE(ssc_smallness(spec, 10.0).holds);
}

TEST(Conditions, LargeDataViolatesUniqueness) {
    ProblemSpec spec = benchmark_spec(31, 50);
    spec.rho0 *= 10.0;
    EXPECT_FALSE(uniqueness_condition(spec).holds);
}

TEST(Coercivity, PureRegularizationGivesAlpha) {
    ProblemSpec spec = test::small_spec();
    spec.rho0.setZero();
    const Problem problem(spec);
    const CoercivityReport r = check_coercivity(problem, ControlField(problem.grid()), 0.0, 16, 1);
    ASSERT_EQ(r.status, CoercivityReport::Status::ok);
    EXPECT_NEAR(r.min_ratio, problem.alpha(), 1e-12);
    EXPECT_TRUE(r.sufficient);
}
