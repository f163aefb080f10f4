#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace fracctl {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Uniform space-time grid on Omega = (a, b) x (0, T).
///
/// Interior nodes are x_i = a + i*dx for i = 1..n (stored 0-based), the
/// exterior of Omega carries the value zero. Time levels are t_k = k*dt for
/// k = 0..nt. The control window omega is the open interval (omega_a, omega_b);
/// a node belongs to it iff omega_a < x_i < omega_b.
class Grid {
public:
    Grid(double a, double b, std::size_t n, double T, std::size_t nt, double omega_a,
         double omega_b);

    /// Window covering all of Omega.
    static Grid full_window(double a, double b, std::size_t n, double T, std::size_t nt);

    double a() const { return a_; }
    double b() const { return b_; }
    std::size_t n() const { return n_; }
    double horizon() const { return T_; }
    std::size_t nt() const { return nt_; }
    double omega_a() const { return omega_a_; }
    double omega_b() const { return omega_b_; }

    double dx() const { return (b_ - a_) / static_cast<double>(n_ + 1); }
    double dt() const { return T_ / static_cast<double>(nt_); }
    double node(std::size_t i) const { return a_ + static_cast<double>(i + 1) * dx(); }
    double time(std::size_t level) const { return static_cast<double>(level) * dt(); }
    Vector nodes() const;

    bool in_window(std::size_t i) const { return window_[i] != 0; }
    const std::vector<char>& window_mask() const { return window_; }
    /// Interior node indices inside omega, ascending.
    const std::vector<std::size_t>& window_nodes() const { return window_nodes_; }
    std::size_t window_size() const { return window_nodes_.size(); }

    /// Lebesgue measure of omega_T as seen by the grid: |omega_h| * T.
    double window_measure() const;

    bool operator==(const Grid& other) const;

private:
    double a_;
    double b_;
    std::size_t n_;
    double T_;
    std::size_t nt_;
    double omega_a_;
    double omega_b_;
    std::vector<char> window_;
    std::vector<std::size_t> window_nodes_;
};

}  // namespace fracctl
