#include <gtest/gtest.h>

#include "fracctl/error.hpp"
#include "fracctl/fields.hpp"
#include "fracctl/grid.hpp"

using namespace fracctl;

TEST(Grid, UniformInteriorNodes) {
    const Grid grid(-1.0, 1.0, 3, 1.0, 4, -0.6, 0.6);
    EXPECT_DOUBLE_EQ(grid.dx(), 0.5);
    EXPECT_DOUBLE_EQ(grid.dt(), 0.25);
    EXPECT_DOUBLE_EQ(grid.node(0), -0.5);
    EXPECT_DOUBLE_EQ(grid.node(2), 0.5);
    EXPECT_EQ(grid.window_size(), 3u);
}

TEST(Grid, WindowIsOpenInterval) {
    const Grid grid(-1.0, 1.0, 3, 1.0, 4, -0.5, 0.5);
    ASSERT_EQ(grid.window_size(), 1u);
    EXPECT_EQ(grid.window_nodes()[0], 1u);
    EXPECT_DOUBLE_EQ(grid.window_measure(), 0.5 * 1.0);
}

TEST(Grid, RejectsInvalidInput) {
    EXPECT_THROW(Grid(1.0, -1.0, 4, 1.0, 4, -0.5, 0.5), Error);
    EXPECT_THROW(Grid(-1.0, 1.0, 0, 1.0, 4, -0.5, 0.5), Error);
    EXPECT_THROW(Grid(-1.0, 1.0, 4, 0.0, 4, -0.5, 0.5), Error);
    EXPECT_THROW(Grid(-1.0, 1.0, 4, 1.0, 4, -1.5, 0.5), Error);
    EXPECT_THROW(Grid(-1.0, 1.0, 4, 1.0, 4, 0.01, 0.02), Error);  // no node inside
}

TEST(Box, ThetaIsLargestMagnitude) {
    EXPECT_DOUBLE_EQ((Box{-2.0, 1.0}.theta()), 2.0);
    EXPECT_DOUBLE_EQ((Box{0.5, 3.0}.theta()), 3.0);
}

TEST(ControlField, ExpandPlacesWindowValues) {
    const Grid grid(-1.0, 1.0, 5, 1.0, 2, -0.5, 0.5);
    ControlField v(grid);
    v.values().setConstant(2.0);
    const Vector full = v.expand(grid, 1);
    for (std::size_t i = 0; i < grid.n(); ++i) {
        EXPECT_EQ(full[static_cast<Eigen::Index>(i)], grid.in_window(i) ? 2.0 : 0.0);
    }
}

TEST(ControlField, InnerProductWeights) {
    const Grid grid(-1.0, 1.0, 5, 1.0, 4, -0.9, 0.9);
    const ControlField one = ControlField::constant(grid, 1.0);
    EXPECT_NEAR(inner(grid, one, one), grid.window_measure(), 1e-15);
    EXPECT_NEAR(l2_norm(grid, 3.0 * one), 3.0 * std::sqrt(grid.window_measure()), 1e-14);
}

TEST(ControlField, AdmissibilityAndTimeConstancy) {
    const Grid grid(-1.0, 1.0, 5, 1.0, 4, -0.9, 0.9);
    ControlField v = ControlField::constant(grid, 0.5);
    EXPECT_TRUE(v.time_constant());
    EXPECT_TRUE(v.is_admissible(Box{-1.0, 1.0}));
    v.values()(0, 2) = 1.5;
    EXPECT_FALSE(v.time_constant());
    EXPECT_FALSE(v.is_admissible(Box{-1.0, 1.0}));
}

TEST(TimeField, ArithmeticAndExtrema) {
    TimeField a(3, 2);
    a[1] << 1.0, -2.0, 3.0;
    TimeField b = 2.0 * a;
    EXPECT_DOUBLE_EQ(b.max_abs(), 6.0);
    EXPECT_DOUBLE_EQ((b - a).min_value(), -2.0);
    EXPECT_TRUE(a.all_finite());
}
