#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "fracctl/error.hpp"
#include "fracctl/io.hpp"
#include "support.hpp"

using namespace fracctl;

TEST(Format, RoundTripsSeventeenDigits) {
    for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
        double back = 0.0;
        ASSERT_TRUE(parse_double(format_double(x), back));
        EXPECT_EQ(back, x);
    }
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}

TEST(Format, ParseRejectsTrailingGarbage) {
    double v = 0.0;
    EXPECT_FALSE(parse_double("1.5x", v));
    EXPECT_FALSE(parse_double("", v));
    EXPECT_TRUE(parse_double("-1e-3", v));
    EXPECT_EQ(v, -1e-3);
}

TEST(Csv, ControlRoundTrip) {
    const Grid grid(-1.0, 1.0, 9, 1.0, 4, -0.5, 0.5);
    const ControlField v = test::random_field(grid, 21);
    std::stringstream buffer;
    write_control_csv(buffer, grid, v);
    EXPECT_EQ(buffer.str().substr(0, 8), "t,x,valu");
    EXPECT_EQ(read_control_csv(buffer, grid), v);
}

TEST(Csv, ControlRejectsWrongGrid) {
    const Grid grid(-1.0, 1.0, 9, 1.0, 4, -0.5, 0.5);
    const Grid other(-1.0, 1.0, 11, 1.0, 4, -0.5, 0.5);
    std::stringstream buffer;
    write_control_csv(buffer, grid, ControlField(grid));
    EXPECT_THROW(read_control_csv(buffer, other), Error);
}

TEST(Csv, VectorRoundTrip) {
    const Grid grid = Grid::full_window(-1.0, 1.0, 7, 1.0, 2);
    const Vector u = test::bump_vector(grid, 0.37);
    std::stringstream buffer;
    write_vector_csv(buffer, grid, u);
    EXPECT_EQ(read_vector_csv(buffer, grid), u);
}

TEST(Csv, TrajectoryHasOneRowPerNodeAndLevel) {
    const Grid grid = Grid::full_window(-1.0, 1.0, 3, 1.0, 2);
    TimeField z(3, 2);
    std::stringstream buffer;
    write_trajectory_csv(buffer, grid, z);
    std::string line;
    int rows = 0;
    std::getline(buffer, line);
    EXPECT_EQ(line, "t,x,value");
    while (std::getline(buffer, line)) ++rows;
    EXPECT_EQ(rows, 9);
}
