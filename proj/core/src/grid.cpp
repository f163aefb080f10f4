#include "fracctl/grid.hpp"

#include <cmath>
#include <sstream>

#include "fracctl/error.hpp"

namespace fracctl {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::invalid_argument: return "invalid argument";
        case ErrorKind::invalid_order: return "invalid order";
        case ErrorKind::dimension_mismatch: return "dimension mismatch";
        case ErrorKind::step_size: return "step-size violation";
        case ErrorKind::numerical: return "numerical failure";
        case ErrorKind::internal: return "internal error";
    }
    return "unknown";
}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

Grid::Grid(double a, double b, std::size_t n, double T, std::size_t nt, double omega_a,
           double omega_b)
    : a_(a), b_(b), n_(n), T_(T), nt_(nt), omega_a_(omega_a), omega_b_(omega_b) {
    require(std::isfinite(a) && std::isfinite(b) && a < b, ErrorKind::invalid_argument,
            "grid: need finite a < b");
    require(n >= 1, ErrorKind::invalid_argument, "grid: need at least one interior node");
    require(nt >= 1, ErrorKind::invalid_argument, "grid: need at least one time step");
    require(std::isfinite(T) && T > 0.0, ErrorKind::invalid_argument,
            "grid: horizon must be positive");
    require(omega_a < omega_b, ErrorKind::invalid_argument,
            "grid: control window must satisfy omega_a < omega_b");
    require(a <= omega_a && omega_b <= b, ErrorKind::invalid_argument,
            "grid: control window must lie inside (a, b)");

    window_.assign(n_, 0);
    for (std::size_t i = 0; i < n_; ++i) {
        const double x = node(i);
        if (omega_a_ < x && x < omega_b_) {
            window_[i] = 1;
            window_nodes_.push_back(i);
        }
    }
    if (window_nodes_.empty()) {
        std::ostringstream msg;
        msg << "grid: control window (" << omega_a << ", " << omega_b
            << ") contains no interior node";
        fail(ErrorKind::invalid_argument, msg.str());
    }
}

Grid Grid::full_window(double a, double b, std::size_t n, double T, std::size_t nt) {
    return Grid(a, b, n, T, nt, a, b);
}

Vector Grid::nodes() const {
    Vector x(static_cast<Eigen::Index>(n_));
    for (std::size_t i = 0; i < n_; ++i) x[static_cast<Eigen::Index>(i)] = node(i);
    return x;
}

double Grid::window_measure() const {
    return static_cast<double>(window_nodes_.size()) * dx() * T_;
}

bool Grid::operator==(const Grid& other) const {
    return a_ == other.a_ && b_ == other.b_ && n_ == other.n_ && T_ == other.T_ &&
           nt_ == other.nt_ && omega_a_ == other.omega_a_ && omega_b_ == other.omega_b_;
}

}  // namespace fracctl
