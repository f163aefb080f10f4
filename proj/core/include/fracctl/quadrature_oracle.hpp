#pragma once

#include <functional>

namespace fracctl {

struct OracleOptions {
    /// Near-field cutoff epsilon; the singular part below it is replaced by a
    /// second-order Taylor term.
    double cutoff = 1e-3;
    /// Step of the central difference used for u''(x).
    double curvature_step = 1e-4;
    /// Relative tolerance handed to the far-field quadrature.
    double tolerance = 1e-12;
};

/// Reference value of the integral fractional Laplacian at a single point,
/// computed straight from the singular integral and independent of any grid.
///
/// `u` must vanish outside [support_a, support_b] and be twice differentiable
/// near x. The value is
///   C_{1,s} [ 2 u(x) eps^{-2s} / (2s) - int_{|x-y|>eps, y in supp} u(y) |x-y|^{-1-2s} dy
///             - u''(x) eps^{2-2s} / (2-2s) ],
/// with the far field integrated by tanh-sinh quadrature (which tolerates
/// endpoint singularities such as (1-x^2)^{1/2}).
double quadrature_oracle(const std::function<double(double)>& u, double x, double s,
                         double support_a, double support_b, const OracleOptions& options = {});

}  // namespace fracctl
