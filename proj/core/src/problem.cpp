#include "fracctl/problem.hpp"

#include <cmath>
#include <sstream>

#include "fracctl/error.hpp"

namespace fracctl {

void ProblemSpec::validate() const {
    require(dimension == 1, ErrorKind::invalid_argument,
            "problem: only spatial dimension 1 is supported");
    require(s > 0.0 && s < 1.0, ErrorKind::invalid_order, "problem: order s outside (0, 1)");
    require(std::isfinite(alpha) && alpha > 0.0, ErrorKind::invalid_argument,
            "problem: alpha must be positive");
    require(std::isfinite(box.lower) && std::isfinite(box.upper) && box.upper > box.lower,
            ErrorKind::invalid_argument, "problem: box bounds need M > m");
    const auto n = static_cast<Eigen::Index>(grid.n());
    require(rho0.size() == n, ErrorKind::dimension_mismatch,
            "problem: initial datum length does not match grid");
    require(rhod.size() == n, ErrorKind::dimension_mismatch,
            "problem: target length does not match grid");
    require(rho0.allFinite() && rhod.allFinite(), ErrorKind::invalid_argument,
            "problem: initial datum and target must be finite");
}

Problem::Problem(ProblemSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    op_ = std::make_shared<const FractionalOperator>(spec_.grid, spec_.s);
}

Problem::Problem(ProblemSpec spec, std::shared_ptr<const FractionalOperator> op)
    : spec_(std::move(spec)), op_(std::move(op)) {
    spec_.validate();
}

Problem Problem::with_data(Vector rho0, Vector rhod) const {
    ProblemSpec copy = spec_;
    copy.rho0 = std::move(rho0);
    copy.rhod = std::move(rhod);
    return Problem(std::move(copy), op_);
}

void Problem::check_step_size() const {
    const double product = grid().dt() * theta();
    if (product > kStepSizeLimit) {
        std::ostringstream msg;
        msg << "step size: dt * theta = " << product << " exceeds " << kStepSizeLimit;
        fail(ErrorKind::step_size, msg.str());
    }
}

}  // namespace fracctl
