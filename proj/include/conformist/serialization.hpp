#pragma once

// JSON forms:
//   PartialConfig  [{"elem": "<element>", "bit": 0|1}, ...]
//   SftSpec        {"lambda": <spec string or table>, "patterns": [<PartialConfig-shaped list>, ...]}
//   SearchOutcome  {"status", "witness", "nodes", "depth", ...}

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "conformist/lamp_group.hpp"
#include "conformist/notation.hpp"
#include "conformist/pattern.hpp"
#include "conformist/search.hpp"
#include "conformist/sft_engine.hpp"

namespace conformist {

using nlohmann::json;

namespace detail {

inline Bit bit_from_json(const json& j) {
    const int v = j.get<int>();
    if (v != 0 && v != 1) throw ParseError("bit must be 0 or 1");
    return to_bit(v);
}

template <class Fn>
auto guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const json::exception& e) {
        throw ParseError(std::string("JSON: ") + e.what());
    }
}

}  // namespace detail

inline json config_to_json(const PartialConfig& cfg) {
    json out = json::array();
    for (const auto& [g, b] : cfg) out.push_back({{"elem", to_string(g)}, {"bit", to_int(b)}});
    return out;
}

inline PartialConfig config_from_json(const json& j, const Lamplighter& group) {
    return detail::guarded([&] {
        PartialConfig cfg;
        for (const auto& cell : j) {
            const Elem g = parse_elem(cell.at("elem").get<std::string>(), group);
            if (cfg.contains(g)) throw ParseError("duplicate cell " + to_string(g));
            cfg.set(g, detail::bit_from_json(cell.at("bit")));
        }
        return cfg;
    });
}

inline json elems_to_json(const std::vector<Elem>& elems) {
    json out = json::array();
    for (const auto& g : elems) out.push_back(to_string(g));
    return out;
}

inline std::vector<Elem> elems_from_json(const json& j, const Lamplighter& group) {
    return detail::guarded([&] {
        std::vector<Elem> out;
        for (const auto& s : j) out.push_back(parse_elem(s.get<std::string>(), group));
        return out;
    });
}

inline json pattern_to_json(const Pattern& p) {
    json out = json::array();
    for (const auto& c : p.cells()) out.push_back({{"elem", to_string(c.elem)}, {"bit", to_int(c.bit)}});
    return out;
}

inline json spec_to_json(const SftSpec& spec) {
    json patterns = json::array();
    for (const auto& p : spec.patterns()) patterns.push_back(pattern_to_json(p));
    return {{"lambda", lambda_to_json(spec.table())}, {"patterns", patterns}};
}

inline SftSpec spec_from_json(const json& j) {
    return detail::guarded([&] {
        FiniteGroupTable table = lambda_from_json(j.at("lambda"));
        const Lamplighter group(table);
        std::vector<Pattern> patterns;
        for (const auto& pj : j.at("patterns")) {
            std::vector<PatternCell> cells;
            for (const auto& c : pj)
                cells.push_back({parse_elem(c.at("elem").get<std::string>(), group), detail::bit_from_json(c.at("bit"))});
            try {
                patterns.emplace_back(std::move(cells));
            } catch (const std::invalid_argument& e) {
                throw ParseError(e.what());
            }
        }
        return SftSpec(std::move(table), std::move(patterns));
    });
}

/// Wall time is only included on request so identical runs give identical output.
inline json outcome_to_json(const SearchOutcome& out, bool include_timing = false) {
    json j = {{"status", to_string(out.status)},
              {"witness", out.witness ? config_to_json(*out.witness) : json(nullptr)},
              {"nodes", out.stats.nodes},
              {"depth", out.stats.max_depth},
              {"conflicts", out.stats.conflicts},
              {"cells", out.stats.cells},
              {"variables", out.stats.variables},
              {"clauses", out.stats.clauses},
              {"subproblems", out.stats.subproblems}};
    if (include_timing) j["wall_time_ms"] = out.wall_ms;
    return j;
}

}  // namespace conformist
