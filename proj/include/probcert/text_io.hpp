#pragma once

// Plain-text inputs: sample files (one decimal per line) and scenario files
// (CSV, one Delta vector per row, no header).

#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "probcert/chernoff_opt.hpp"
#include "probcert/errors.hpp"

namespace probcert {

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

/// Parses the whole field as a finite double or throws InputError.
inline double parse_number(std::string_view field, std::size_t line, std::string_view what) {
    field = trim(field);
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    double value = 0.0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (field.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value)) {
        throw InputError("line " + std::to_string(line) + ": " + std::string(what) + " '" + std::string(field) +
                             "' is not a finite decimal number",
                         line);
    }
    return value;
}

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return in;
}

}  // namespace detail

/// Reads one value per line. Blank lines are skipped; any other line must
/// hold a single number in [0,1]. Errors carry the 1-based line number.
inline std::vector<double> read_sample_values(std::istream& in) {
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto field = detail::trim(line);
        if (field.empty()) continue;
        const double v = detail::parse_number(field, line_no, "value");
        if (!(v >= 0.0 && v <= 1.0)) {
            throw InputError("line " + std::to_string(line_no) + ": value " + std::string(field) +
                                 " lies outside [0,1]",
                             line_no);
        }
        values.push_back(v);
    }
    if (in.bad()) throw IoError("read error after line " + std::to_string(line_no));
    if (values.empty()) throw InputError("sample file contains no values", line_no);
    return values;
}

inline std::vector<double> read_sample_file(const std::string& path) {
    auto in = detail::open_input(path);
    return read_sample_values(in);
}

/// Reads CSV rows of equal width into a ScenarioSet (seed 0: not generated).
inline ScenarioSet read_scenario_csv(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view rest = detail::trim(line);
        if (rest.empty()) continue;
        std::vector<double> row;
        while (true) {
            const auto comma = rest.find(',');
            row.push_back(detail::parse_number(rest.substr(0, comma), line_no, "field"));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw InputError("line " + std::to_string(line_no) + ": " + std::to_string(row.size()) +
                                 " fields, expected " + std::to_string(rows.front().size()),
                             line_no);
        }
        rows.push_back(std::move(row));
    }
    if (in.bad()) throw IoError("read error after line " + std::to_string(line_no));
    if (rows.empty()) throw InputError("scenario file contains no rows", line_no);
    return ScenarioSet::from_rows(rows);
}

inline ScenarioSet read_scenario_file(const std::string& path) {
    auto in = detail::open_input(path);
    return read_scenario_csv(in);
}

}  // namespace probcert
