#include "akgp/common.hpp"

#include <array>
#include <charconv>

namespace akgp {

std::string format_double(double v) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{}) throw std::runtime_error("format_double: to_chars failed");
    return {buf.data(), end};
}

double parse_double(std::string_view token) {
    double v = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
        throw ParseError("not a number: '" + std::string(token) + "'");
    }
    return v;
}

}  // namespace akgp
