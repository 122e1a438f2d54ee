#pragma once

// Textual element syntax and Λ specs.
//
//   e            identity
//   t^k, t       pure shifts
//   a<i>@<pos>   the lamp [α_i]_pos
//   x * y * ...  product in the displayed left-to-right order
//
// Printing always yields the normal form: lamps by increasing position,
// then the shift, e.g. "a2@-1 * t^3".
//
// Λ specs: "cyclic:<m>", "product:<spec>x<spec>", or a JSON object
// {"order": n, "mult": [[...]], "inv": [...], "identity": 0}.

#include <cctype>
#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "conformist/lamp_group.hpp"

namespace conformist {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

template <class Int>
Int parse_int(std::string_view s, std::string_view what) {
    Int value{};
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (s.empty() || ec != std::errc{} || ptr != end)
        throw ParseError("malformed " + std::string(what) + ": '" + std::string(s) + "'");
    return value;
}

}  // namespace detail

inline std::string to_string(const Elem& g) {
    if (g.is_identity()) return "e";
    std::string out;
    for (const auto& e : g.lamp.entries()) {
        if (!out.empty()) out += " * ";
        out += "a" + std::to_string(e.value) + "@" + std::to_string(e.position);
    }
    if (g.shift != 0) {
        if (!out.empty()) out += " * ";
        out += "t^" + std::to_string(g.shift);
    }
    return out;
}

inline std::string to_string(const Lamp& mu) { return to_string(Elem{mu, 0}); }

inline Elem parse_factor(std::string_view token, const Lamplighter& group) {
    token = detail::trim(token);
    if (token.empty()) throw ParseError("empty factor in element expression");
    if (token == "e") return Elem::identity();
    if (token == "t") return Elem::t_power(1);
    if (token.starts_with("t^")) return Elem::t_power(detail::parse_int<std::int64_t>(token.substr(2), "shift"));
    if (token.front() == 'a') {
        const auto at = token.find('@');
        if (at == std::string_view::npos) throw ParseError("lamp factor needs '@<pos>': '" + std::string(token) + "'");
        const auto value = detail::parse_int<GroupIndex>(token.substr(1, at - 1), "lamp value");
        const auto pos = detail::parse_int<std::int64_t>(token.substr(at + 1), "lamp position");
        if (value >= group.ell())
            throw ParseError("lamp value a" + std::to_string(value) + " out of range for order " +
                             std::to_string(group.ell()));
        return group.lamp_embed(value, pos);
    }
    throw ParseError("unrecognized factor: '" + std::string(token) + "'");
}

inline Elem parse_elem(std::string_view text, const Lamplighter& group) {
    if (detail::trim(text).empty()) throw ParseError("empty element expression");
    Elem acc;
    std::size_t start = 0;
    while (true) {
        const auto star = text.find('*', start);
        acc = group.multiply(acc, parse_factor(text.substr(start, star - start), group));
        if (star == std::string_view::npos) break;
        start = star + 1;
    }
    return acc;
}

inline Lamp parse_lamp(std::string_view text, const Lamplighter& group) {
    Elem g = parse_elem(text, group);
    if (g.shift != 0) throw ParseError("expected a lamp (shift 0), got '" + std::string(text) + "'");
    return g.lamp;
}

inline FiniteGroupTable table_from_json(const nlohmann::json& j) {
    try {
        auto mult = j.at("mult").get<std::vector<std::vector<GroupIndex>>>();
        auto inv = j.at("inv").get<std::vector<GroupIndex>>();
        const auto identity = j.value("identity", GroupIndex{0});
        if (j.contains("order") && j.at("order").get<std::size_t>() != mult.size())
            throw ParseError("group table: 'order' does not match table size");
        return FiniteGroupTable(std::move(mult), std::move(inv), identity);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("group table JSON: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
}

inline nlohmann::json table_to_json(const FiniteGroupTable& table) {
    return {{"order", table.order()}, {"mult", table.mult_table()}, {"inv", table.inv_table()}, {"identity", 0}};
}

namespace detail {

inline FiniteGroupTable parse_lambda_prefix(std::string_view& s) {
    if (s.starts_with("cyclic:")) {
        s.remove_prefix(7);
        std::size_t n = 0;
        while (n < s.size() && std::isdigit(static_cast<unsigned char>(s[n]))) ++n;
        const auto m = parse_int<std::uint32_t>(s.substr(0, n), "cyclic order");
        s.remove_prefix(n);
        if (m == 0) throw ParseError("cyclic order must be positive");
        return FiniteGroupTable::cyclic(m);
    }
    if (s.starts_with("product:")) {
        s.remove_prefix(8);
        FiniteGroupTable left = parse_lambda_prefix(s);
        if (s.empty() || s.front() != 'x') throw ParseError("product spec needs '<spec>x<spec>'");
        s.remove_prefix(1);
        FiniteGroupTable right = parse_lambda_prefix(s);
        return FiniteGroupTable::product(left, right);
    }
    throw ParseError("unrecognized group spec: '" + std::string(s) + "'");
}

}  // namespace detail

/// Parses a Λ spec; the whole string must be consumed.
inline FiniteGroupTable parse_lambda(std::string_view spec) {
    spec = detail::trim(spec);
    if (!spec.empty() && spec.front() == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(spec);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("group table JSON: ") + e.what());
        }
        return table_from_json(j);
    }
    std::string_view rest = spec;
    FiniteGroupTable table = detail::parse_lambda_prefix(rest);
    if (!rest.empty()) throw ParseError("trailing characters in group spec: '" + std::string(rest) + "'");
    return table;
}

/// Serializable form of a table: its label when it has one, else the JSON table.
inline nlohmann::json lambda_to_json(const FiniteGroupTable& table) {
    if (!table.label().empty()) return table.label();
    return table_to_json(table);
}

inline FiniteGroupTable lambda_from_json(const nlohmann::json& j) {
    if (j.is_string()) return parse_lambda(j.get<std::string>());
    return table_from_json(j);
}

}  // namespace conformist
