#include "vstream/numfmt.hpp"

#include <charconv>
#include <cmath>

namespace vstream
{

std::string format_number(double v, int digits)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    if (v == 0.0)
        v = 0.0; // drop the sign of -0
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, digits);
    return std::string(buf, ec == std::errc{} ? ptr : buf);
}

} // namespace vstream
