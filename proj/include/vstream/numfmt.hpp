#pragma once

#include <string>

namespace vstream
{

/// Locale-independent shortest form with `digits` significant digits.
std::string format_number(double v, int digits = 9);

} // namespace vstream
