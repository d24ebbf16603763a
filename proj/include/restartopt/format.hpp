#pragma once

#include <charconv>
#include <string>

namespace restartopt {

// Shortest round-trip decimal form, locale-free; keeps emitted tables
// byte-identical across runs and parseable back to the exact double.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace restartopt
