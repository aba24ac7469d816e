#pragma once

#include <string>
#include <vector>

namespace bai::format {

// Shortest-safe round-trip text for a double: 17 significant digits, with
// "inf", "-inf" and "nan" for non-finite values.
std::string num(double x);

std::string join(const std::vector<std::string>& cells, char sep = ',');

}  // namespace bai::format
