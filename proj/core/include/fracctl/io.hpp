#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "fracctl/fields.hpp"
#include "fracctl/grid.hpp"

namespace fracctl {

/// 17 significant digits, locale-independent.
std::string format_double(double value);

/// Locale-independent parse; false unless the whole string is a number.
bool parse_double(std::string_view text, double& value);

/// `t,x,value` with one row per (snapshot, node), snapshots 0..nt.
void write_trajectory_csv(std::ostream& out, const Grid& grid, const TimeField& field);
/// `t,x,value` with one row per (level 1..nt, window node).
void write_control_csv(std::ostream& out, const Grid& grid, const ControlField& control);
/// Reads the format written by write_control_csv. Coordinates must match the
/// grid to 1e-9 relative; throws Error(invalid_argument) otherwise.
ControlField read_control_csv(std::istream& in, const Grid& grid);

/// `x,value` with one row per interior node.
void write_vector_csv(std::ostream& out, const Grid& grid, const Vector& values);
Vector read_vector_csv(std::istream& in, const Grid& grid);

}  // namespace fracctl
