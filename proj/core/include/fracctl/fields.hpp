#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "fracctl/grid.hpp"

namespace fracctl {

/// Space-time trajectory: snapshots u^0..u^{nt}, each of length n.
class TimeField {
public:
    TimeField() = default;
    /// Zero trajectory with nt + 1 snapshots.
    TimeField(std::size_t n, std::size_t nt);

    std::size_t size() const { return n_; }
    /// Number of time steps nt (there are nt + 1 snapshots).
    std::size_t levels() const { return snapshots_.empty() ? 0 : snapshots_.size() - 1; }

    Vector& operator[](std::size_t level) { return snapshots_[level]; }
    const Vector& operator[](std::size_t level) const { return snapshots_[level]; }

    double max_abs() const;
    double min_value() const;
    bool all_finite() const;

    TimeField& operator+=(const TimeField& other);
    TimeField& operator-=(const TimeField& other);
    TimeField& operator*=(double factor);

    bool operator==(const TimeField& other) const;

private:
    std::size_t n_ = 0;
    std::vector<Vector> snapshots_;
};

TimeField operator+(TimeField lhs, const TimeField& rhs);
TimeField operator-(TimeField lhs, const TimeField& rhs);
TimeField operator*(double factor, TimeField field);

/// Box constraint m <= v <= M of the admissible set.
struct Box {
    double lower = -1.0;
    double upper = 1.0;

    /// theta = max(|m|, |M|), the sup-norm bound of admissible controls.
    double theta() const;
    double width() const { return upper - lower; }
    bool operator==(const Box&) const = default;
};

using ControlMask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Values on omega nodes x implicit time levels 1..nt.
///
/// Row j is the j-th window node (Grid::window_nodes()[j]) and column k - 1
/// is time level k. Used for controls and for control-space directions.
class ControlField {
public:
    ControlField() = default;
    /// Zero field shaped for the grid.
    explicit ControlField(const Grid& grid);
    ControlField(const Grid& grid, Matrix values);

    static ControlField constant(const Grid& grid, double value);

    Eigen::Index rows() const { return values_.rows(); }
    Eigen::Index cols() const { return values_.cols(); }
    const Matrix& values() const { return values_; }
    Matrix& values() { return values_; }

    /// Value at window node j and time level (1-based).
    double at(Eigen::Index j, std::size_t level) const;

    /// Level slab scattered onto all n interior nodes (zero off the window).
    Vector expand(const Grid& grid, std::size_t level) const;

    double sup_norm() const;
    bool all_finite() const { return values_.allFinite(); }
    bool is_admissible(const Box& box) const;
    /// True when every time level carries the same slab.
    bool time_constant() const;
    bool same_shape(const ControlField& other) const;

    ControlField& operator+=(const ControlField& other);
    ControlField& operator-=(const ControlField& other);
    ControlField& operator*=(double factor);

    bool operator==(const ControlField& other) const;

private:
    Matrix values_;
};

ControlField operator+(ControlField lhs, const ControlField& rhs);
ControlField operator-(ControlField lhs, const ControlField& rhs);
ControlField operator*(double factor, ControlField field);

/// Discrete L2(omega_T) inner product dx dt sum a b.
double inner(const Grid& grid, const ControlField& a, const ControlField& b);
/// Discrete L2(omega_T) norm.
double l2_norm(const Grid& grid, const ControlField& a);

/// Restriction of a spatial field at one level to the window: (w^k * u)_i on
/// window nodes, zero elsewhere.
Vector window_product(const Grid& grid, const ControlField& w, std::size_t level, const Vector& u);

}  // namespace fracctl
