#pragma once

// Forbidden-pattern SFTs on a lamplighter group, checked on finite windows.
//
// A forbidden pattern p on F occurs at g when cfg(g·f) = p(f) for all f ∈ F.
// Only translates whose whole support g·F lies inside the window are
// tested; constraints leaving the window are skipped.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "conformist/lamp_group.hpp"
#include "conformist/pattern.hpp"
#include "conformist/subshift.hpp"

namespace conformist {

/// A lamplighter group together with a deduplicated forbidden-pattern list.
class SftSpec {
public:
    SftSpec(FiniteGroupTable table, std::vector<Pattern> patterns) : group_(std::move(table)) {
        for (auto& p : patterns)
            if (std::find(patterns_.begin(), patterns_.end(), p) == patterns_.end()) patterns_.push_back(std::move(p));
        for (const auto& p : patterns_)
            for (const auto& c : p.cells())
                for (const auto& e : c.elem.lamp.entries()) group_.check_index(e.value);
    }

    const Lamplighter& group() const { return group_; }
    const FiniteGroupTable& table() const { return group_.table(); }
    const std::vector<Pattern>& patterns() const { return patterns_; }

private:
    Lamplighter group_;
    std::vector<Pattern> patterns_;
};

/// The conformist subshift on (⊕_Z Λ) ⋊ Z; requires |Λ| ≥ 3.
inline SftSpec conformist_spec(const FiniteGroupTable& table) {
    return SftSpec(table, forbidden_patterns(table.order()));
}

enum class PatternStatus { Violated, Satisfied, Undetermined };

inline PatternStatus violates_at(const PartialConfig& cfg, const Pattern& p, const Elem& g, const Lamplighter& group) {
    bool unknown = false;
    for (const auto& cell : p.cells()) {
        const auto v = cfg.get(group.multiply(g, cell.elem));
        if (!v) {
            unknown = true;
        } else if (*v != cell.bit) {
            return PatternStatus::Satisfied;
        }
    }
    return unknown ? PatternStatus::Undetermined : PatternStatus::Violated;
}

struct Violation {
    std::size_t pattern_index = 0;
    Elem translate;

    friend bool operator==(const Violation&, const Violation&) = default;
};

struct AdmissibilityReport {
    bool admissible = true;
    std::vector<Violation> violations;
    std::size_t translates_checked = 0;
};

namespace detail {

// Groups pattern indices by identical support so anchors are computed once per support.
inline std::map<std::vector<Elem>, std::vector<std::size_t>> patterns_by_support(const SftSpec& spec) {
    std::map<std::vector<Elem>, std::vector<std::size_t>> out;
    for (std::size_t i = 0; i < spec.patterns().size(); ++i) out[spec.patterns()[i].support()].push_back(i);
    return out;
}

/// Every g with g·F inside `domain`, sorted.
template <class Contains>
std::vector<Elem> full_translates(const std::vector<Elem>& support, const std::vector<Elem>& domain,
                                  const Lamplighter& group, Contains&& contains) {
    const Elem anchor_inv = group.inverse(support.front());
    std::set<Elem> out;
    for (const auto& c : domain) {
        Elem g = group.multiply(c, anchor_inv);
        bool inside = true;
        for (std::size_t i = 1; i < support.size() && inside; ++i) inside = contains(group.multiply(g, support[i]));
        if (inside) out.insert(std::move(g));
    }
    return {out.begin(), out.end()};
}

inline std::vector<Elem> domain_of(const PartialConfig& cfg) {
    std::vector<Elem> out;
    out.reserve(cfg.size());
    for (const auto& [g, b] : cfg) out.push_back(g);
    return out;
}

}  // namespace detail

/// Reports every (pattern, translate) occurring inside the window.
inline AdmissibilityReport is_admissible(const PartialConfig& cfg, const SftSpec& spec) {
    AdmissibilityReport report;
    const auto& group = spec.group();
    const auto domain = detail::domain_of(cfg);
    for (const auto& [support, indices] : detail::patterns_by_support(spec)) {
        const auto translates =
            detail::full_translates(support, domain, group, [&](const Elem& h) { return cfg.contains(h); });
        report.translates_checked += translates.size() * indices.size();
        for (const auto& g : translates)
            for (std::size_t idx : indices)
                if (violates_at(cfg, spec.patterns()[idx], g, group) == PatternStatus::Violated)
                    report.violations.push_back({idx, g});
    }
    std::sort(report.violations.begin(), report.violations.end(), [](const Violation& a, const Violation& b) {
        return a.pattern_index != b.pattern_index ? a.pattern_index < b.pattern_index : a.translate < b.translate;
    });
    report.admissible = report.violations.empty();
    return report;
}

/// σ₀ restricted to the given elements.
inline PartialConfig sample_sigma0(const std::vector<Elem>& domain, const Lamplighter& group) {
    PartialConfig cfg;
    for (const auto& g : domain) cfg.set(g, sigma0(g, group));
    return cfg;
}

/// Lamps supported in {-1, ..., -depth}, excluding the identity lamp.
inline std::vector<Lamp> negative_lamps(std::size_t ell, std::size_t depth) {
    std::vector<Lamp> out;
    std::vector<GroupIndex> digits(depth, 0);
    while (true) {
        std::size_t i = 0;
        while (i < depth && ++digits[i] == ell) digits[i++] = 0;
        if (i == depth) break;
        std::vector<LampEntry> entries;
        for (std::size_t p = 0; p < depth; ++p) entries.push_back({-static_cast<std::int64_t>(p) - 1, digits[p]});
        out.push_back(Lamp::from_entries(std::move(entries)));
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct AuditFailure {
    Elem base;
    Lamp offset;
    Bit base_bit = Bit::Zero;
    Bit moved_bit = Bit::Zero;
};

struct AuditReport {
    std::size_t pairs_checked = 0;
    std::vector<AuditFailure> failures;
    bool passed() const { return failures.empty(); }
};

/// Checks cfg(g·μ) = cfg(g) for every g in the window and every lamp μ
/// supported in {-1, ..., -depth} with g·μ also in the window.
inline AuditReport negative_lamp_audit(const PartialConfig& cfg, const Lamplighter& group, std::size_t depth) {
    if (depth == 0) throw std::invalid_argument("negative_lamp_audit: depth must be positive");
    AuditReport report;
    const auto offsets = negative_lamps(group.ell(), depth);
    for (const auto& [g, bit] : cfg) {
        for (const auto& mu : offsets) {
            const auto moved = cfg.get(group.multiply(g, Elem{mu, 0}));
            if (!moved) continue;
            ++report.pairs_checked;
            if (*moved != bit) report.failures.push_back({g, mu, bit, *moved});
        }
    }
    return report;
}

inline AuditReport negative_lamp_audit(const PartialConfig& cfg, const SftSpec& spec, std::size_t depth) {
    return negative_lamp_audit(cfg, spec.group(), depth);
}

}  // namespace conformist
