#pragma once

#include <cstddef>
#include <iosfwd>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "fracctl/grid.hpp"

namespace fracctl {

/// Fractional centered-difference weights g_0..g_{count-1} of order s.
///
/// g_0 = Gamma(2s+1) / Gamma(s+1)^2 and g_{k+1} = g_k (k - s) / (k + 1 + s).
/// Validates 0 < s < 1; the result is unscaled (multiply by dx^{-2s}).
Vector assemble_weights(double s, std::size_t count);

/// Same recurrence without the order check. Accepts any s > 0, which lets
/// callers probe the s = 1 limit (the classical [2, -1, 0, ...] stencil).
Vector centered_difference_weights(double s, std::size_t count);

/// C_{1,s} = s 2^{2s} Gamma((2s+1)/2) / (sqrt(pi) Gamma(1-s)).
double normalization_constant(double s);

/// Value of the operator applied to (1 - x^2)_+^s on (-1, 1), which is the
/// constant 2^{2s} Gamma(s+1) Gamma(s+1/2) / Gamma(1/2).
double bump_profile_constant(double s);

/// Restricted fractional Laplacian on a uniform grid with zero exterior data:
/// the symmetric Toeplitz matrix A_ij = dx^{-2s} g_{|i-j|}.
///
/// The matrix is symmetric positive definite with non-positive off-diagonal
/// entries and non-negative row sums, i.e. an M-matrix. The instance is
/// immutable after construction and safe to share between threads.
class FractionalOperator {
public:
    FractionalOperator(const Grid& grid, double s);

    double order() const { return s_; }
    std::size_t size() const { return static_cast<std::size_t>(weights_.size()); }
    double dx() const { return dx_; }
    /// dx^{-2s}
    double scale() const { return scale_; }
    const Vector& weights() const { return weights_; }
    double entry(std::size_t i, std::size_t j) const;
    const Matrix& dense() const { return dense_; }

    /// A u
    Vector apply(const Vector& u) const;
    /// A u computed from the weight sequence only, without the dense matrix.
    Vector apply_toeplitz(const Vector& u) const;
    /// A^{-1} f
    Vector solve(const Vector& f) const;
    /// Discrete bilinear form F(u, v) = dx u^T A v.
    double form(const Vector& u, const Vector& v) const;

    /// Row-major dense matrix, one row per line, 17 significant digits.
    void export_csv(std::ostream& out) const;

private:
    double s_;
    double dx_;
    double scale_;
    Vector weights_;
    Matrix dense_;
    Eigen::LLT<Matrix> factor_;
};

}  // namespace fracctl
