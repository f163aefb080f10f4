#include "fracctl/norms.hpp"

#include <algorithm>
#include <cmath>

#include "fracctl/error.hpp"
#include "fracctl/fields.hpp"

namespace fracctl {

double l2_norm(double dx, const Vector& u) { return std::sqrt(dx * u.squaredNorm()); }

double linf_norm(const Vector& u) { return u.size() == 0 ? 0.0 : u.cwiseAbs().maxCoeff(); }

double v_norm(const FractionalOperator& op, const Vector& u) {
    return std::sqrt(std::max(0.0, op.form(u, u)));
}

double vstar_norm(const FractionalOperator& op, const Vector& f) {
    const Vector x = op.solve(f);
    require(x.allFinite(), ErrorKind::internal, "vstar_norm: singular operator solve");
    return std::sqrt(std::max(0.0, op.dx() * f.dot(x)));
}

SpatialNorms norms(const FractionalOperator& op, const Vector& u) {
    return {l2_norm(op.dx(), u), linf_norm(u), v_norm(op, u), vstar_norm(op, u)};
}

double sup_l2_norm(const Grid& grid, const TimeField& field) {
    double out = 0.0;
    for (std::size_t k = 0; k <= field.levels(); ++k) {
        out = std::max(out, l2_norm(grid.dx(), field[k]));
    }
    return out;
}

double l2_l2_norm(const Grid& grid, const TimeField& field) {
    double acc = 0.0;
    for (std::size_t k = 1; k <= field.levels(); ++k) acc += field[k].squaredNorm();
    return std::sqrt(grid.dt() * grid.dx() * acc);
}

double l2_v_norm(const Grid& grid, const FractionalOperator& op, const TimeField& field) {
    double acc = 0.0;
    for (std::size_t k = 1; k <= field.levels(); ++k) acc += op.form(field[k], field[k]);
    return std::sqrt(std::max(0.0, grid.dt() * acc));
}

double l2_vstar_norm(const Grid& grid, const FractionalOperator& op, const TimeField& field) {
    double acc = 0.0;
    for (std::size_t k = 1; k <= field.levels(); ++k) {
        const double v = vstar_norm(op, field[k]);
        acc += v * v;
    }
    return std::sqrt(grid.dt() * acc);
}

double linf_norm(const TimeField& field) { return field.max_abs(); }

}  // namespace fracctl
