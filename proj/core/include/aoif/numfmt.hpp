#ifndef AOIF_NUMFMT_HPP
#define AOIF_NUMFMT_HPP

#include <charconv>
#include <string>

namespace aoif {

// Shortest decimal form that round-trips to the same double.
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace aoif

#endif
