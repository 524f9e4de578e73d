#pragma once

#include <charconv>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "onetwo/errors.hpp"
#include "onetwo/graph.hpp"

namespace onetwo {

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n'))
        s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

inline std::optional<long long> to_nonneg(std::string_view tok) {
    long long x = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
    if (ec != std::errc() || p != tok.data() + tok.size() || x < 0) return std::nullopt;
    return x;
}

}  // namespace detail

// Lines "u v"; '#' starts a comment line; an optional first line "n <count>"
// fixes the vertex count, otherwise it is 1 + the largest id mentioned.
inline Graph parse_edge_list(std::istream& in) {
    std::optional<long long> header;
    std::vector<Edge> edges;
    long long max_id = -1;
    std::string line;
    int lineno = 0;
    bool seen_content = false;
    while (std::getline(in, line)) {
        ++lineno;
        auto s = detail::trim(line);
        if (s.empty() || s.front() == '#') continue;
        auto tok = detail::split_ws(s);
        auto where = "line " + std::to_string(lineno) + ": ";
        if (tok.size() == 2 && tok[0] == "n") {
            if (seen_content) throw ParseError(where + "'n' header must precede the edges");
            auto c = detail::to_nonneg(tok[1]);
            if (!c) throw ParseError(where + "bad vertex count '" + std::string(tok[1]) + "'");
            header = *c;
            seen_content = true;
            continue;
        }
        if (tok.size() != 2) throw ParseError(where + "expected two vertex ids");
        auto a = detail::to_nonneg(tok[0]);
        auto b = detail::to_nonneg(tok[1]);
        if (!a || !b) throw ParseError(where + "vertex ids must be non-negative integers");
        if (*a > 1'000'000'000 || *b > 1'000'000'000) throw ParseError(where + "vertex id too large");
        seen_content = true;
        if (*a == *b) throw ValidationError(where + "self-loop at vertex " + std::to_string(*a));
        edges.push_back({static_cast<Vertex>(*a), static_cast<Vertex>(*b)});
        max_id = std::max({max_id, *a, *b});
    }
    long long n = header ? *header : max_id + 1;
    if (header && max_id >= *header)
        throw ValidationError("vertex id " + std::to_string(max_id) + " exceeds header count " +
                              std::to_string(*header));
    if (n > 100'000'000) throw ResourceError("vertex count too large");
    return Graph(static_cast<int>(n), std::move(edges));
}

inline Graph parse_edge_list(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_edge_list(in);
}

inline std::string to_edge_list(const Graph& g) {
    std::string out = "n " + std::to_string(g.order()) + "\n";
    for (const auto& e : g.edges()) out += std::to_string(e.u) + " " + std::to_string(e.v) + "\n";
    return out;
}

// graph6: printable bytes 63..126 carrying 6 bits each; the vertex count,
// then the upper triangle in column order (0,1),(0,2),(1,2),(0,3),...
inline Graph parse_graph6(std::string_view line) {
    auto s = detail::trim(line);
    if (s.substr(0, 10) == ">>graph6<<") s.remove_prefix(10);
    if (s.empty()) throw ParseError("graph6: empty string");
    for (char c : s)
        if (static_cast<unsigned char>(c) < 63 || static_cast<unsigned char>(c) > 126)
            throw ParseError(std::string("graph6: invalid character '") + c + "'");
    std::size_t pos = 0;
    auto take = [&]() -> int {
        if (pos >= s.size()) throw ParseError("graph6: truncated vertex count");
        return static_cast<unsigned char>(s[pos++]) - 63;
    };
    long long n = take();
    if (n == 63) {
        if (pos < s.size() && s[pos] == '~') throw ParseError("graph6: vertex counts above 258047 unsupported");
        n = 0;
        for (int i = 0; i < 3; ++i) n = (n << 6) | take();
    }
    long long bits = n * (n - 1) / 2;
    long long need = (bits + 5) / 6;
    long long have = static_cast<long long>(s.size() - pos);
    if (have < need) throw ParseError("graph6: truncated bit vector");
    if (have > need) throw ParseError("graph6: trailing characters");
    std::vector<Edge> edges;
    long long k = 0;
    for (int j = 1; j < n; ++j)
        for (int i = 0; i < j; ++i, ++k) {
            int byte = static_cast<unsigned char>(s[pos + k / 6]) - 63;
            if (byte & (1 << (5 - k % 6))) edges.push_back({i, j});
        }
    return Graph(static_cast<int>(n), std::move(edges));
}

inline std::string to_graph6(const Graph& g) {
    long long n = g.order();
    if (n > 258047) throw ResourceError("graph6: vertex count " + std::to_string(n) + " unsupported");
    std::string out;
    if (n < 63) {
        out.push_back(static_cast<char>(63 + n));
    } else {
        out.push_back(126);
        for (int sh = 12; sh >= 0; sh -= 6) out.push_back(static_cast<char>(63 + ((n >> sh) & 63)));
    }
    long long bits = n * (n - 1) / 2;
    std::vector<int> packed(static_cast<std::size_t>((bits + 5) / 6), 0);
    for (const auto& e : g.edges()) {
        long long k = static_cast<long long>(e.v) * (e.v - 1) / 2 + e.u;
        packed[k / 6] |= 1 << (5 - k % 6);
    }
    for (int b : packed) out.push_back(static_cast<char>(63 + b));
    return out;
}

}  // namespace onetwo
