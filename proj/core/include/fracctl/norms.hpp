#pragma once

#include "fracctl/fractional_operator.hpp"
#include "fracctl/grid.hpp"

namespace fracctl {

class TimeField;

struct SpatialNorms {
    double l2 = 0.0;
    double linf = 0.0;
    /// (dx u^T A u)^{1/2}, the discrete H^s_0 norm.
    double v_seminorm = 0.0;
    /// (dx f^T A^{-1} f)^{1/2}, the dual norm under the dx-weighted pairing.
    double vstar_norm = 0.0;
};

double l2_norm(double dx, const Vector& u);
double linf_norm(const Vector& u);
double v_norm(const FractionalOperator& op, const Vector& u);
double vstar_norm(const FractionalOperator& op, const Vector& f);
SpatialNorms norms(const FractionalOperator& op, const Vector& u);

// Space-time versions. Integrals in time use the implicit levels 1..nt with
// weight dt; sup norms run over every snapshot including level 0.
double sup_l2_norm(const Grid& grid, const TimeField& field);
double l2_l2_norm(const Grid& grid, const TimeField& field);
double l2_v_norm(const Grid& grid, const FractionalOperator& op, const TimeField& field);
double l2_vstar_norm(const Grid& grid, const FractionalOperator& op, const TimeField& field);
double linf_norm(const TimeField& field);

}  // namespace fracctl
