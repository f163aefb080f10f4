#include "fracctl/quadrature_oracle.hpp"

#include <cmath>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fracctl/error.hpp"
#include "fracctl/fractional_operator.hpp"

namespace fracctl {

double quadrature_oracle(const std::function<double(double)>& u, double x, double s,
                         double support_a, double support_b, const OracleOptions& options) {
    const double eps = options.cutoff;
    require(eps > 0.0 && std::isfinite(eps), ErrorKind::invalid_argument,
            "quadrature oracle: cutoff must be positive");
    require(s > 0.0 && s < 1.0, ErrorKind::invalid_order,
            "quadrature oracle: order outside (0, 1)");
    require(support_a < support_b, ErrorKind::invalid_argument,
            "quadrature oracle: empty support");

    const double ux = u(x);
    require(std::isfinite(ux), ErrorKind::numerical, "quadrature oracle: u(x) not finite");

    boost::math::quadrature::tanh_sinh<double> integrator;
    auto integrand = [&](double y) {
        const double value = u(y) / std::pow(std::abs(x - y), 1.0 + 2.0 * s);
        if (!std::isfinite(value)) {
            fail(ErrorKind::numerical, "quadrature oracle: non-finite integrand");
        }
        return value;
    };

    double far = 0.0;
    const double left_end = std::min(x - eps, support_b);
    if (left_end > support_a) {
        far += integrator.integrate(integrand, support_a, left_end, options.tolerance);
    }
    const double right_start = std::max(x + eps, support_a);
    if (right_start < support_b) {
        far += integrator.integrate(integrand, right_start, support_b, options.tolerance);
    }

    // Near field needs u'' at x; zero when x sits outside the support.
    double curvature = 0.0;
    if (x - eps > support_a && x + eps < support_b) {
        const double h = std::min(options.curvature_step, 0.5 * eps);
        curvature = (u(x + h) - 2.0 * ux + u(x - h)) / (h * h);
    } else if (!(x + eps <= support_a || x - eps >= support_b)) {
        fail(ErrorKind::invalid_argument,
             "quadrature oracle: cutoff ball straddles the support boundary");
    }

    const double exterior = 2.0 * ux * std::pow(eps, -2.0 * s) / (2.0 * s);
    const double near = -curvature * std::pow(eps, 2.0 - 2.0 * s) / (2.0 - 2.0 * s);
    const double value = normalization_constant(s) * (exterior - far + near);
    require(std::isfinite(value), ErrorKind::numerical, "quadrature oracle: non-finite result");
    return value;
}

}  // namespace fracctl
