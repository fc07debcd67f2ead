#ifndef CSTN_TEXTIO_HPP
#define CSTN_TEXTIO_HPP

#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

// Shortest-round-trip number formatting shared by the config, CSV and dump
// writers. std::to_chars guarantees parse(format(x)) == x bitwise, which the
// lossless round-trip contracts rely on.

namespace cstn {

inline std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

inline std::string format_u64(std::uint64_t value) {
    char buf[24];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

inline double parse_double(std::string_view text, const std::string& what) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw std::runtime_error("bad numeric value for " + what + ": '" + std::string(text) + "'");
    return value;
}

inline std::uint64_t parse_u64(std::string_view text, const std::string& what) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw std::runtime_error("bad integer value for " + what + ": '" + std::string(text) + "'");
    return value;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace cstn

#endif  // CSTN_TEXTIO_HPP
