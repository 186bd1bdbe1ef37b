#pragma once

#include <charconv>
#include <cstdint>
#include <string>

namespace vswe {

/// Shortest round-trip decimal form, locale independent. All text output
/// (CSV, rasters) goes through here so identical runs produce identical bytes.
inline void append_double(std::string& out, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, res.ptr);
}

inline std::string fmt_double(double v) {
    std::string s;
    append_double(s, v);
    return s;
}

inline void append_int(std::string& out, std::int64_t v) {
    char buf[24];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, res.ptr);
}

}  // namespace vswe
