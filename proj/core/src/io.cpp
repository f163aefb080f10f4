#include "fracctl/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "fracctl/error.hpp"

namespace fracctl {
namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream stream(line);
    while (std::getline(stream, cell, ',')) out.push_back(cell);
    return out;
}

bool close_to(double a, double b, double scale) {
    return std::abs(a - b) <= 1e-9 * std::max(1.0, scale);
}

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::vector<double>> read_rows(std::istream& in, std::size_t columns,
                                           const std::string& header) {
    std::string line;
    if (!std::getline(in, line) || trim(line) != header) {
        fail(ErrorKind::invalid_argument, "csv: expected header '" + header + "'");
    }
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_csv(line);
        if (cells.size() != columns) {
            fail(ErrorKind::invalid_argument,
                 "csv: line " + std::to_string(line_no) + " has wrong column count");
        }
        std::vector<double> row(columns);
        for (std::size_t c = 0; c < columns; ++c) {
            if (!parse_double(trim(cells[c]), row[c])) {
                fail(ErrorKind::invalid_argument,
                     "csv: line " + std::to_string(line_no) + " has a malformed number");
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

std::string format_double(double value) {
    char buffer[64];
    const auto result =
        std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::general, 17);
    return std::string(buffer, result.ptr);
}

bool parse_double(std::string_view text, double& value) {
    if (text.empty()) return false;
    if (text.front() == '+') text.remove_prefix(1);
    const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
    return result.ec == std::errc() && result.ptr == text.data() + text.size();
}

void write_trajectory_csv(std::ostream& out, const Grid& grid, const TimeField& field) {
    out << "t,x,value\n";
    for (std::size_t k = 0; k <= field.levels(); ++k) {
        const std::string t = format_double(grid.time(k));
        for (std::size_t i = 0; i < field.size(); ++i) {
            out << t << ',' << format_double(grid.node(i)) << ','
                << format_double(field[k][static_cast<Eigen::Index>(i)]) << '\n';
        }
    }
}

void write_control_csv(std::ostream& out, const Grid& grid, const ControlField& control) {
    out << "t,x,value\n";
    const auto& nodes = grid.window_nodes();
    for (std::size_t k = 1; k <= grid.nt(); ++k) {
        const std::string t = format_double(grid.time(k));
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            out << t << ',' << format_double(grid.node(nodes[j])) << ','
                << format_double(control.at(static_cast<Eigen::Index>(j), k)) << '\n';
        }
    }
}

ControlField read_control_csv(std::istream& in, const Grid& grid) {
    const auto rows = read_rows(in, 3, "t,x,value");
    const auto& nodes = grid.window_nodes();
    if (rows.size() != nodes.size() * grid.nt()) {
        fail(ErrorKind::invalid_argument,
             "control csv: expected " + std::to_string(nodes.size() * grid.nt()) + " rows, got " +
                 std::to_string(rows.size()));
    }
    ControlField out(grid);
    std::size_t r = 0;
    for (std::size_t k = 1; k <= grid.nt(); ++k) {
        for (std::size_t j = 0; j < nodes.size(); ++j, ++r) {
            const auto& row = rows[r];
            if (!close_to(row[0], grid.time(k), grid.horizon()) ||
                !close_to(row[1], grid.node(nodes[j]), grid.b() - grid.a())) {
                fail(ErrorKind::invalid_argument,
                     "control csv: row " + std::to_string(r + 2) + " does not match the grid");
            }
            out.values()(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k) - 1) = row[2];
        }
    }
    return out;
}

void write_vector_csv(std::ostream& out, const Grid& grid, const Vector& values) {
    out << "x,value\n";
    for (std::size_t i = 0; i < grid.n(); ++i) {
        out << format_double(grid.node(i)) << ','
            << format_double(values[static_cast<Eigen::Index>(i)]) << '\n';
    }
}

Vector read_vector_csv(std::istream& in, const Grid& grid) {
    const auto rows = read_rows(in, 2, "x,value");
    if (rows.size() != grid.n()) {
        fail(ErrorKind::invalid_argument, "vector csv: expected " + std::to_string(grid.n()) +
                                              " rows, got " + std::to_string(rows.size()));
    }
    Vector out(static_cast<Eigen::Index>(grid.n()));
    for (std::size_t i = 0; i < grid.n(); ++i) {
        if (!close_to(rows[i][0], grid.node(i), grid.b() - grid.a())) {
            fail(ErrorKind::invalid_argument,
                 "vector csv: row " + std::to_string(i + 2) + " does not match the grid");
        }
        out[static_cast<Eigen::Index>(i)] = rows[i][1];
    }
    return out;
}

}  // namespace fracctl
