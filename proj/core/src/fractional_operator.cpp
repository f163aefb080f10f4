#include "fracctl/fractional_operator.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include "fracctl/error.hpp"
#include "fracctl/io.hpp"

namespace fracctl {

Vector centered_difference_weights(double s, std::size_t count) {
    require(std::isfinite(s) && s > 0.0, ErrorKind::invalid_order,
            "fractional order must be positive");
    require(count >= 1, ErrorKind::invalid_argument, "weight count must be at least 1");
    Vector g(static_cast<Eigen::Index>(count));
    // Recurrence instead of Gamma ratios per k: Gamma(s - k + 1) overflows for large k.
    g[0] = std::tgamma(2.0 * s + 1.0) / (std::tgamma(s + 1.0) * std::tgamma(s + 1.0));
    for (Eigen::Index k = 0; k + 1 < g.size(); ++k) {
        const double kk = static_cast<double>(k);
        g[k + 1] = g[k] * (kk - s) / (kk + 1.0 + s);
    }
    return g;
}

Vector assemble_weights(double s, std::size_t count) {
    if (!(s > 0.0 && s < 1.0)) {
        std::ostringstream msg;
        msg << "fractional order s = " << s << " outside (0, 1)";
        fail(ErrorKind::invalid_order, msg.str());
    }
    return centered_difference_weights(s, count);
}

double normalization_constant(double s) {
    require(s > 0.0 && s < 1.0, ErrorKind::invalid_order, "fractional order outside (0, 1)");
    return s * std::pow(2.0, 2.0 * s) * std::tgamma((2.0 * s + 1.0) / 2.0) /
           (std::sqrt(std::numbers::pi) * std::tgamma(1.0 - s));
}

double bump_profile_constant(double s) {
    require(s > 0.0 && s < 1.0, ErrorKind::invalid_order, "fractional order outside (0, 1)");
    return std::pow(2.0, 2.0 * s) * std::tgamma(s + 1.0) * std::tgamma(s + 0.5) /
           std::tgamma(0.5);
}

FractionalOperator::FractionalOperator(const Grid& grid, double s)
    : s_(s),
      dx_(grid.dx()),
      scale_(std::pow(grid.dx(), -2.0 * s)),
      weights_(assemble_weights(s, grid.n())) {
    const auto n = weights_.size();
    dense_.resize(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            dense_(i, j) = scale_ * weights_[std::abs(i - j)];
        }
    }
    factor_.compute(dense_);
    require(factor_.info() == Eigen::Success, ErrorKind::internal,
            "fractional operator: Cholesky factorization failed");
}

double FractionalOperator::entry(std::size_t i, std::size_t j) const {
    const auto k = i > j ? i - j : j - i;
    return scale_ * weights_[static_cast<Eigen::Index>(k)];
}

Vector FractionalOperator::apply(const Vector& u) const {
    require(u.size() == weights_.size(), ErrorKind::dimension_mismatch,
            "apply_operator: vector length does not match grid");
    return dense_ * u;
}

Vector FractionalOperator::apply_toeplitz(const Vector& u) const {
    require(u.size() == weights_.size(), ErrorKind::dimension_mismatch,
            "apply_operator: vector length does not match grid");
    const auto n = u.size();
    Vector out(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double acc = weights_[0] * u[i];
        for (Eigen::Index k = 1; k <= i; ++k) acc += weights_[k] * u[i - k];
        for (Eigen::Index k = 1; i + k < n; ++k) acc += weights_[k] * u[i + k];
        out[i] = scale_ * acc;
    }
    return out;
}

Vector FractionalOperator::solve(const Vector& f) const {
    require(f.size() == weights_.size(), ErrorKind::dimension_mismatch,
            "operator solve: vector length does not match grid");
    return factor_.solve(f);
}

double FractionalOperator::form(const Vector& u, const Vector& v) const {
    require(u.size() == weights_.size() && v.size() == weights_.size(),
            ErrorKind::dimension_mismatch, "form: vector length does not match grid");
    return dx_ * u.dot(dense_ * v);
}

void FractionalOperator::export_csv(std::ostream& out) const {
    for (Eigen::Index i = 0; i < dense_.rows(); ++i) {
        for (Eigen::Index j = 0; j < dense_.cols(); ++j) {
            if (j > 0) out << ',';
            out << format_double(dense_(i, j));
        }
        out << '\n';
    }
}

}  // namespace fracctl
