#pragma once

#include <string>

namespace dpde {

/// Shortest decimal string that reads back to the same double.
std::string format_shortest(double value);

/// printf "%.6g".
std::string format_sig6(double value);

/// "1/n" when 1/value is an integer n (to 1e-9 relative), else format_shortest.
std::string format_spacing(double value);

}  // namespace dpde
