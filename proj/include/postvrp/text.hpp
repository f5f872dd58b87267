#ifndef POSTVRP_TEXT_HPP
#define POSTVRP_TEXT_HPP

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "error.hpp"

namespace postvrp::text {

struct Token {
    std::string value;
    std::size_t column = 0; // 1-based
    bool quoted = false;
};

/// Splits one line into whitespace-separated tokens. Double-quoted tokens may
/// contain spaces and the escapes \" and \\. An unquoted '#' starts a comment.
inline std::vector<Token> tokenize(std::string_view line, std::size_t line_no) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            continue;
        }
        if (c == '#')
            break;
        Token tok;
        tok.column = i + 1;
        if (c == '"') {
            tok.quoted = true;
            ++i;
            bool closed = false;
            while (i < line.size()) {
                char q = line[i++];
                if (q == '"') {
                    closed = true;
                    break;
                }
                if (q == '\\') {
                    if (i >= line.size() || (line[i] != '"' && line[i] != '\\'))
                        throw ParseError(line_no, i, "invalid escape in quoted string");
                    q = line[i++];
                }
                tok.value.push_back(q);
            }
            if (!closed)
                throw ParseError(line_no, tok.column, "unterminated quoted string");
            if (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != '#')
                throw ParseError(line_no, i + 1, "expected whitespace after quoted string");
        } else {
            while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != '#')
                tok.value.push_back(line[i++]);
        }
        tokens.push_back(std::move(tok));
    }
    return tokens;
}

inline std::string quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\')
            out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

/// Splits text into lines on LF; a trailing LF does not produce an empty last line.
inline std::vector<std::string_view> lines(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos)
            end = text.size();
        out.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    return out;
}

inline std::optional<double> to_real(std::string_view s) {
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, std::chars_format::general);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
        return std::nullopt;
    return v;
}

template <class Int>
std::optional<Int> to_int(std::string_view s) {
    Int v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        return std::nullopt;
    return v;
}

inline double expect_real(const Token& t, std::size_t line_no, std::string_view what) {
    auto v = to_real(t.value);
    if (!v)
        throw ParseError(line_no, t.column, "expected a number for " + std::string(what) + ", got '" + t.value + "'");
    return *v;
}

template <class Int>
Int expect_int(const Token& t, std::size_t line_no, std::string_view what) {
    auto v = to_int<Int>(t.value);
    if (!v)
        throw ParseError(line_no, t.column, "expected an integer for " + std::string(what) + ", got '" + t.value + "'");
    return *v;
}

/// Shortest decimal string that parses back to exactly `v`.
inline std::string shortest(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

/// Fixed-point with `digits` decimals ("%.*f"), never "-0".
inline std::string fixed(double v, int digits) {
    char buf[512];
    int len = std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    std::string s(buf, static_cast<std::size_t>(len));
    if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos)
        s.erase(0, 1);
    return s;
}

}

#endif
