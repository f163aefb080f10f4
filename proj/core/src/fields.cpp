#include "fracctl/fields.hpp"

#include <algorithm>
#include <cmath>

#include "fracctl/error.hpp"

namespace fracctl {

TimeField::TimeField(std::size_t n, std::size_t nt)
    : n_(n), snapshots_(nt + 1, Vector::Zero(static_cast<Eigen::Index>(n))) {}

double TimeField::max_abs() const {
    double out = 0.0;
    for (const auto& s : snapshots_) {
        if (s.size() > 0) out = std::max(out, s.cwiseAbs().maxCoeff());
    }
    return out;
}

double TimeField::min_value() const {
    double out = 0.0;
    bool first = true;
    for (const auto& s : snapshots_) {
        if (s.size() == 0) continue;
        const double m = s.minCoeff();
        out = first ? m : std::min(out, m);
        first = false;
    }
    return out;
}

bool TimeField::all_finite() const {
    return std::all_of(snapshots_.begin(), snapshots_.end(),
                       [](const Vector& s) { return s.allFinite(); });
}

TimeField& TimeField::operator+=(const TimeField& other) {
    require(n_ == other.n_ && levels() == other.levels(), ErrorKind::dimension_mismatch,
            "time field shapes differ");
    for (std::size_t k = 0; k < snapshots_.size(); ++k) snapshots_[k] += other.snapshots_[k];
    return *this;
}

TimeField& TimeField::operator-=(const TimeField& other) {
    require(n_ == other.n_ && levels() == other.levels(), ErrorKind::dimension_mismatch,
            "time field shapes differ");
    for (std::size_t k = 0; k < snapshots_.size(); ++k) snapshots_[k] -= other.snapshots_[k];
    return *this;
}

TimeField& TimeField::operator*=(double factor) {
    for (auto& s : snapshots_) s *= factor;
    return *this;
}

bool TimeField::operator==(const TimeField& other) const {
    if (n_ != other.n_ || snapshots_.size() != other.snapshots_.size()) return false;
    for (std::size_t k = 0; k < snapshots_.size(); ++k) {
        if (snapshots_[k] != other.snapshots_[k]) return false;
    }
    return true;
}

TimeField operator+(TimeField lhs, const TimeField& rhs) { return lhs += rhs; }
TimeField operator-(TimeField lhs, const TimeField& rhs) { return lhs -= rhs; }
TimeField operator*(double factor, TimeField field) { return field *= factor; }

double Box::theta() const { return std::max(std::abs(lower), std::abs(upper)); }

ControlField::ControlField(const Grid& grid)
    : values_(Matrix::Zero(static_cast<Eigen::Index>(grid.window_size()),
                           static_cast<Eigen::Index>(grid.nt()))) {}

ControlField::ControlField(const Grid& grid, Matrix values) : values_(std::move(values)) {
    require(values_.rows() == static_cast<Eigen::Index>(grid.window_size()) &&
                values_.cols() == static_cast<Eigen::Index>(grid.nt()),
            ErrorKind::dimension_mismatch, "control field shape does not match grid");
}

ControlField ControlField::constant(const Grid& grid, double value) {
    ControlField out(grid);
    out.values_.setConstant(value);
    return out;
}

double ControlField::at(Eigen::Index j, std::size_t level) const {
    return values_(j, static_cast<Eigen::Index>(level) - 1);
}

Vector ControlField::expand(const Grid& grid, std::size_t level) const {
    Vector out = Vector::Zero(static_cast<Eigen::Index>(grid.n()));
    const auto& nodes = grid.window_nodes();
    const auto col = static_cast<Eigen::Index>(level) - 1;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        out[static_cast<Eigen::Index>(nodes[j])] = values_(static_cast<Eigen::Index>(j), col);
    }
    return out;
}

double ControlField::sup_norm() const {
    return values_.size() == 0 ? 0.0 : values_.cwiseAbs().maxCoeff();
}

bool ControlField::is_admissible(const Box& box) const {
    return values_.size() == 0 ||
           (values_.minCoeff() >= box.lower && values_.maxCoeff() <= box.upper);
}

bool ControlField::time_constant() const {
    for (Eigen::Index k = 1; k < values_.cols(); ++k) {
        if (values_.col(k) != values_.col(0)) return false;
    }
    return true;
}

bool ControlField::same_shape(const ControlField& other) const {
    return values_.rows() == other.values_.rows() && values_.cols() == other.values_.cols();
}

ControlField& ControlField::operator+=(const ControlField& other) {
    require(same_shape(other), ErrorKind::dimension_mismatch, "control field shapes differ");
    values_ += other.values_;
    return *this;
}

ControlField& ControlField::operator-=(const ControlField& other) {
    require(same_shape(other), ErrorKind::dimension_mismatch, "control field shapes differ");
    values_ -= other.values_;
    return *this;
}

ControlField& ControlField::operator*=(double factor) {
    values_ *= factor;
    return *this;
}

bool ControlField::operator==(const ControlField& other) const {
    return same_shape(other) && values_ == other.values_;
}

ControlField operator+(ControlField lhs, const ControlField& rhs) { return lhs += rhs; }
ControlField operator-(ControlField lhs, const ControlField& rhs) { return lhs -= rhs; }
ControlField operator*(double factor, ControlField field) { return field *= factor; }

double inner(const Grid& grid, const ControlField& a, const ControlField& b) {
    require(a.same_shape(b), ErrorKind::dimension_mismatch, "control field shapes differ");
    return grid.dx() * grid.dt() * a.values().cwiseProduct(b.values()).sum();
}

double l2_norm(const Grid& grid, const ControlField& a) {
    return std::sqrt(grid.dx() * grid.dt() * a.values().squaredNorm());
}

Vector window_product(const Grid& grid, const ControlField& w, std::size_t level,
                      const Vector& u) {
    Vector out = Vector::Zero(static_cast<Eigen::Index>(grid.n()));
    const auto& nodes = grid.window_nodes();
    const auto col = static_cast<Eigen::Index>(level) - 1;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        const auto i = static_cast<Eigen::Index>(nodes[j]);
        out[i] = w.values()(static_cast<Eigen::Index>(j), col) * u[i];
    }
    return out;
}

}  // namespace fracctl
