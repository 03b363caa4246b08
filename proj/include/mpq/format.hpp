#pragma once

#include <span>
#include <string>

namespace mpq {

/// %.17g, with -0 printed as 0 and non-finite values as null.
std::string format_real(double v);
std::string format_array(std::span<const double> values);
std::string json_quote(const std::string& s);

}  // namespace mpq
