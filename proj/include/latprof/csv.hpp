#ifndef LATPROF_CSV_HPP
#define LATPROF_CSV_HPP

#include <optional>
#include <string>
#include <vector>

namespace latprof {

// Shortest decimal representation that parses back to exactly the same
// double. Keeps CSV output readable while making round-trips lossless.
std::string format_double(double x);

std::vector<std::string> split_csv_line(const std::string& line);

std::optional<double> parse_double(const std::string& s);
std::optional<long long> parse_int(const std::string& s);

// Strip a UTF-8 BOM and trailing CR (files written on Windows).
std::string normalize_line(std::string line, bool first_line);

}  // namespace latprof

#endif  // LATPROF_CSV_HPP
