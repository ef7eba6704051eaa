#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace xa {

/// Shortest decimal text that parses back to exactly the same double.
inline std::string format_double(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc{}) {
        return "nan";
    }
    return std::string(buf, end);
}

}  // namespace xa
