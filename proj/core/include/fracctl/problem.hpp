#pragma once

#include <memory>

#include "fracctl/fields.hpp"
#include "fracctl/fractional_operator.hpp"
#include "fracctl/grid.hpp"

namespace fracctl {

/// Full instance of the bilinear control problem
///   min 1/2 |rho(T) - rho_d|^2 + alpha/2 |v|^2  over m <= v <= M,
///   rho_t + (-Delta)^s rho = v rho chi_omega,  rho(0) = rho_0.
struct ProblemSpec {
    Grid grid;
    double s = 0.5;
    double alpha = 1.0;
    Box box;
    Vector rho0;
    Vector rhod;
    /// Spatial dimension; only 1 is supported.
    int dimension = 1;

    /// Throws Error(invalid_argument / invalid_order) on a broken instance.
    void validate() const;
    double theta() const { return box.theta(); }
};

/// A validated ProblemSpec bound to its assembled fractional operator.
class Problem {
public:
    explicit Problem(ProblemSpec spec);

    const ProblemSpec& spec() const { return spec_; }
    const Grid& grid() const { return spec_.grid; }
    const FractionalOperator& op() const { return *op_; }
    const Box& box() const { return spec_.box; }
    double alpha() const { return spec_.alpha; }
    double theta() const { return spec_.theta(); }
    const Vector& rho0() const { return spec_.rho0; }
    const Vector& rhod() const { return spec_.rhod; }

    /// Same grid and operator, different data. Reuses the assembled operator.
    Problem with_data(Vector rho0, Vector rhod) const;

    /// Throws Error(step_size) unless dt * theta <= 1/2.
    void check_step_size() const;

private:
    Problem(ProblemSpec spec, std::shared_ptr<const FractionalOperator> op);

    ProblemSpec spec_;
    std::shared_ptr<const FractionalOperator> op_;
};

/// Upper bound on dt * |v|_inf keeping every step matrix an M-matrix with
/// comfortable margin.
inline constexpr double kStepSizeLimit = 0.5;

}  // namespace fracctl
