#pragma once

// Random instance generators shared by the verification suites.

#include <cmath>
#include <numbers>
#include <random>

#include "fracctl/fields.hpp"
#include "fracctl/problem.hpp"

namespace fracctl::detail {

inline Vector random_vector(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Vector out(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = dist(rng);
    return out;
}

inline ControlField random_control(std::mt19937_64& rng, const Grid& grid, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    ControlField out(grid);
    for (Eigen::Index c = 0; c < out.cols(); ++c) {
        for (Eigen::Index r = 0; r < out.rows(); ++r) out.values()(r, c) = dist(rng);
    }
    return out;
}

inline ControlField gaussian_control(std::mt19937_64& rng, const Grid& grid) {
    std::normal_distribution<double> dist(0.0, 1.0);
    ControlField out(grid);
    for (Eigen::Index c = 0; c < out.cols(); ++c) {
        for (Eigen::Index r = 0; r < out.rows(); ++r) out.values()(r, c) = dist(rng);
    }
    return out;
}

/// Few-mode function of (x, t) sampled on the grid, so the same continuum
/// control can be evaluated on refined grids.
struct SmoothField {
    double coeff[3][2];

    static SmoothField draw(std::mt19937_64& rng, double amplitude) {
        std::uniform_real_distribution<double> dist(-amplitude, amplitude);
        SmoothField f{};
        for (auto& row : f.coeff) {
            for (double& c : row) c = dist(rng);
        }
        return f;
    }

    double operator()(double xi, double tau) const {
        // xi, tau in [0, 1]
        double value = 0.0;
        for (int k = 0; k < 3; ++k) {
            const double spatial = std::sin((k + 1) * std::numbers::pi * xi);
            value += spatial * (coeff[k][0] + coeff[k][1] * std::cos(std::numbers::pi * tau));
        }
        return value;
    }

    ControlField sample(const Grid& grid, const Box& box) const {
        ControlField out(grid);
        const auto& nodes = grid.window_nodes();
        const double width = grid.omega_b() - grid.omega_a();
        for (std::size_t k = 1; k <= grid.nt(); ++k) {
            for (std::size_t j = 0; j < nodes.size(); ++j) {
                const double xi = (grid.node(nodes[j]) - grid.omega_a()) / width;
                const double value = (*this)(xi, grid.time(k) / grid.horizon());
                out.values()(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k) - 1) =
                    std::clamp(value, box.lower, box.upper);
            }
        }
        return out;
    }
};

inline Grid random_window_grid(std::mt19937_64& rng, std::size_t n, double T, std::size_t nt) {
    std::uniform_real_distribution<double> left(-0.9, -0.1);
    std::uniform_real_distribution<double> right(0.1, 0.9);
    return Grid(-1.0, 1.0, n, T, nt, left(rng), right(rng));
}

inline double random_order(std::mt19937_64& rng) {
    return std::uniform_real_distribution<double>(0.15, 0.85)(rng);
}

}  // namespace fracctl::detail
