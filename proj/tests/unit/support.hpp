#pragma once

#include <cmath>
#include <random>

#include "fracctl/problem.hpp"

namespace fracctl::test {

inline Vector bump_vector(const Grid& grid, double amplitude) {
    Vector out(static_cast<Eigen::Index>(grid.n()));
    for (std::size_t i = 0; i < grid.n(); ++i) {
        const double x = grid.node(i);
        out[static_cast<Eigen::Index>(i)] = amplitude * std::max(0.0, 1.0 - x * x);
    }
    return out;
}

inline ProblemSpec small_spec(std::size_t n = 24, std::size_t nt = 40, double s = 0.4) {
    const Grid grid(-1.0, 1.0, n, 0.5, nt, -0.5, 0.5);
    return ProblemSpec{grid, s, 1.0, Box{-1.0, 1.0}, bump_vector(grid, 0.8), bump_vector(grid, -0.3), 1};
}

inline ControlField random_field(const Grid& grid, std::uint64_t seed, double lo = -0.8, double hi = 0.8) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    ControlField out(grid);
    for (Eigen::Index c = 0; c < out.cols(); ++c) {
        for (Eigen::Index r = 0; r < out.rows(); ++r) out.values()(r, c) = dist(rng);
    }
    return out;
}

}  // namespace fracctl::test
