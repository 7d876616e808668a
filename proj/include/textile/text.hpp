#pragma once

#include <string>
#include <vector>

namespace textile {

// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double v);

double parse_double(const std::string& s);  // throws std::invalid_argument
long long parse_int(const std::string& s);

std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace textile
