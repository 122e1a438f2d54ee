#pragma once

// Finite-index subgroups Γ of the lamplighter, described by a membership
// oracle for L = Γ ∩ ⊕_Z Λ, and the refutation that a Γ-invariant
// configuration of the conformist subshift is unanimous on Λ_0 = RM(t).

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "conformist/lamp_group.hpp"
#include "conformist/notation.hpp"
#include "conformist/random.hpp"
#include "conformist/sft_engine.hpp"
#include "conformist/subshift.hpp"

namespace conformist {

class InconsistentDescriptor : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A normal finite-index subgroup Γ, given through L = Γ ∩ ⊕_Z Λ.
struct SubgroupDescriptor {
    std::function<bool(const Lamp&)> member;
    /// Order of t acting on ⊕_Z Λ / L. Declared, not computed.
    std::int64_t period = 1;
    /// Smallest m with t^m ∈ Γ.
    std::int64_t t_power = 1;
    std::string description;
};

/// L = {μ : for each residue r mod d the product of coordinates at
/// positions ≡ r is trivial}, with t^d ∈ Γ. Λ must be abelian.
inline SubgroupDescriptor make_sum_kernel(const FiniteGroupTable& table, std::int64_t period) {
    if (!table.is_abelian()) throw std::invalid_argument("sum kernel requires an abelian Λ");
    if (period <= 0) throw std::invalid_argument("sum kernel period must be positive");
    auto shared = std::make_shared<const FiniteGroupTable>(table);
    SubgroupDescriptor out;
    out.period = period;
    out.t_power = period;
    out.description = "sumker:" + (table.label().empty() ? std::string("table") : table.label()) + ":" +
                      std::to_string(period);
    out.member = [shared, period](const Lamp& mu) {
        std::vector<GroupIndex> sums(static_cast<std::size_t>(period), 0);
        for (const auto& e : mu.entries()) {
            const auto r = static_cast<std::size_t>(((e.position % period) + period) % period);
            sums[r] = shared->mul(sums[r], e.value);
        }
        for (GroupIndex s : sums)
            if (s != 0) return false;
        return true;
    };
    return out;
}

/// Parses "sumker:<lambda-spec>:<d>".
inline std::pair<FiniteGroupTable, SubgroupDescriptor> parse_descriptor(std::string_view text) {
    if (!text.starts_with("sumker:")) throw ParseError("unknown subgroup descriptor: '" + std::string(text) + "'");
    const auto colon = text.rfind(':');
    if (colon <= 6) throw ParseError("subgroup descriptor needs 'sumker:<lambda>:<d>'");
    FiniteGroupTable table = parse_lambda(text.substr(7, colon - 7));
    const auto d = detail::parse_int<std::int64_t>(text.substr(colon + 1), "period");
    try {
        return {table, make_sum_kernel(table, d)};
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
}

struct Decomposition {
    Lamp in_subgroup;  // μ_L
    Lamp negative;     // μ_-
    std::int64_t k = 0;
};

/// μ = μ_L · μ_- with μ_L ∈ L and μ_- = t^{-kd} μ t^{kd} supported below 0,
/// k minimal.
inline Decomposition decompose(const Lamp& mu, const SubgroupDescriptor& sub, const FiniteGroupTable& table) {
    Decomposition out;
    const auto top = mu.max_position();
    out.k = (top && *top >= 0) ? *top / sub.period + 1 : 0;
    out.negative = mu.shifted(-out.k * sub.period);
    out.in_subgroup = mu.multiplied(out.negative.inverted(table), table);
    if (!sub.member(out.in_subgroup))
        throw InconsistentDescriptor("decompose: " + to_string(out.in_subgroup) + " is not in L for " +
                                     sub.description + "; declared period " + std::to_string(sub.period) +
                                     " is not the order of t on the quotient");
    if (out.in_subgroup.multiplied(out.negative, table) != mu)
        throw std::logic_error("decompose: product check failed");
    return out;
}

/// Spot checks of the descriptor's declared structure on random lamps.
inline std::vector<std::string> check_descriptor(const SubgroupDescriptor& sub, const FiniteGroupTable& table,
                                                 Rng& rng, std::size_t samples = 200) {
    std::vector<std::string> problems;
    if (!sub.member(Lamp{})) problems.push_back("identity lamp is not a member");
    std::vector<Lamp> members;
    for (std::size_t i = 0; i < samples * 50 && members.size() < samples; ++i) {
        Lamp mu = random_lamp(rng, table.order(), 5);
        if (sub.member(mu)) members.push_back(std::move(mu));
        Lamp nu = random_lamp(rng, table.order(), 5);
        if (sub.member(nu) != sub.member(nu.shifted(sub.period)))
            problems.push_back("L is not t^d-stable at " + to_string(nu));
    }
    for (std::size_t i = 0; i + 1 < members.size(); ++i) {
        if (!sub.member(members[i].multiplied(members[i + 1], table)))
            problems.push_back("L is not closed under products");
        if (!sub.member(members[i].inverted(table))) problems.push_back("L is not closed under inverses");
    }
    return problems;
}

/// Lamps with support of size ≤ 2 inside [lo, hi] that lie in L, plus t^m.
/// These generate the part of Γ acting within a window on those positions.
inline std::vector<Elem> window_generators(const SubgroupDescriptor& sub, const Lamplighter& group, std::int64_t lo,
                                           std::int64_t hi) {
    std::vector<Elem> out;
    const auto ell = static_cast<GroupIndex>(group.ell());
    for (std::int64_t i = lo; i <= hi; ++i) {
        for (GroupIndex a = 1; a < ell; ++a) {
            Lamp single = Lamp::single(a, i);
            if (sub.member(single)) out.push_back({single, 0});
            for (std::int64_t j = i + 1; j <= hi; ++j) {
                for (GroupIndex b = 1; b < ell; ++b) {
                    Lamp pair = Lamp::from_entries({{i, a}, {j, b}});
                    if (sub.member(pair)) out.push_back({std::move(pair), 0});
                }
            }
        }
    }
    out.push_back(Elem::t_power(sub.t_power));
    return out;
}

/// window_generators over the lamp positions used by `domain`.
inline std::vector<Elem> window_generators(const SubgroupDescriptor& sub, const Lamplighter& group,
                                           const std::vector<Elem>& domain) {
    std::int64_t lo = 0, hi = 0;
    for (const auto& g : domain) {
        if (auto p = g.lamp.min_position()) lo = std::min(lo, *p);
        if (auto p = g.lamp.max_position()) hi = std::max(hi, *p);
    }
    return window_generators(sub, group, lo, hi);
}

/// One equality σ(from) = σ(to) in the refutation chain.
///   Invariance:     from = via · to with via ∈ L, so σ(from) = (σ·via)(to) = σ(to).
///   NegativeLamp:   from = to · via with via supported in {-1, ..., -depth},
///                   so σ(from) = σ(to) in any configuration of the subshift.
struct JustificationStep {
    enum class Rule { Invariance, NegativeLamp };
    Rule rule = Rule::Invariance;
    Elem from;
    Elem to;
    Lamp via;
};

inline const char* to_string(JustificationStep::Rule r) {
    return r == JustificationStep::Rule::Invariance ? "invariance" : "negative-lamp";
}

struct CertificateRow {
    GroupIndex value = 0;
    Elem target;  // [λ]_0
    std::int64_t k = 0;
    Lamp in_subgroup;
    Lamp negative;
    std::vector<JustificationStep> chain;
};

struct ContradictionCertificate {
    std::string subgroup;
    std::int64_t period = 1;
    std::size_t ell = 0;
    std::vector<CertificateRow> rows;
    Elem center;                  // t
    std::vector<Elem> role_models;  // RM(t) = Λ_0
    std::string conclusion;
};

namespace detail {

inline bool is_conformist_spec(const SftSpec& spec) {
    const auto expected = forbidden_patterns(spec.group().ell());
    if (expected.size() != spec.patterns().size()) return false;
    for (const auto& p : expected)
        if (std::find(spec.patterns().begin(), spec.patterns().end(), p) == spec.patterns().end()) return false;
    return true;
}

}  // namespace detail

/// For every λ, chains σ([λ]_0) = σ(μ_-) = σ(1_G). Any Γ-invariant σ in the
/// subshift would then be unanimous on Λ_0 = RM(t), which has no NUSM.
inline ContradictionCertificate certify_contradiction(const SubgroupDescriptor& sub, const SftSpec& spec) {
    if (!detail::is_conformist_spec(spec))
        throw std::invalid_argument("certify_contradiction: spec is not the conformist subshift for its Λ");
    const auto& group = spec.group();
    ContradictionCertificate cert;
    cert.subgroup = sub.description;
    cert.period = sub.period;
    cert.ell = group.ell();
    cert.center = Elem::t_power(1);
    cert.role_models = group.role_models(cert.center);
    for (GroupIndex v = 0; v < group.ell(); ++v) {
        CertificateRow row;
        row.value = v;
        row.target = group.lamp_embed(v, 0);
        const auto parts = decompose(row.target.lamp, sub, group.table());
        row.k = parts.k;
        row.in_subgroup = parts.in_subgroup;
        row.negative = parts.negative;
        const Elem negative{parts.negative, 0};
        row.chain.push_back({JustificationStep::Rule::Invariance, row.target, negative, parts.in_subgroup});
        row.chain.push_back({JustificationStep::Rule::NegativeLamp, negative, Elem::identity(), parts.negative});
        cert.rows.push_back(std::move(row));
    }
    cert.conclusion = "every Γ-invariant configuration takes the value σ(e) on all of Λ_0 = RM(t); "
                      "a unanimous row has no non-unanimous strict majority, so the pattern at t is forbidden";
    return cert;
}

struct CertificateCheck {
    bool valid = true;
    std::vector<std::string> problems;
};

/// Re-derives every group identity and membership claim of a certificate.
inline CertificateCheck validate_certificate(const ContradictionCertificate& cert, const SubgroupDescriptor& sub,
                                             const Lamplighter& group) {
    CertificateCheck out;
    auto fail = [&](std::string msg) {
        out.valid = false;
        out.problems.push_back(std::move(msg));
    };
    if (group.ell() < 3) fail("ℓ < 3: unanimity does not contradict anything");
    if (cert.ell != group.ell()) fail("certificate ℓ does not match the group");
    if (cert.center != Elem::t_power(1)) fail("center is not t");

    // RM(t) = t t^-1 Λ_0 recomputed from the group law
    std::set<Elem> lambda0;
    for (GroupIndex v = 0; v < group.ell(); ++v)
        lambda0.insert(group.multiply(group.multiply(Elem::t_power(1), Elem::t_power(-1)), Elem{Lamp::single(v, 0), 0}));
    if (std::set<Elem>(cert.role_models.begin(), cert.role_models.end()) != lambda0)
        fail("recorded role models of t differ from Λ_0");

    std::set<Elem> targets;
    for (const auto& row : cert.rows) {
        targets.insert(row.target);
        if (row.chain.empty() || row.chain.front().from != row.target) {
            fail("chain for a" + std::to_string(row.value) + " does not start at its target");
            continue;
        }
        Elem at = row.target;
        for (const auto& step : row.chain) {
            if (step.from != at) fail("chain for a" + std::to_string(row.value) + " is not contiguous");
            at = step.to;
            if (step.rule == JustificationStep::Rule::Invariance) {
                if (group.multiply(Elem{step.via, 0}, step.to) != step.from)
                    fail("invariance step " + to_string(step.from) + " != via * " + to_string(step.to));
                if (!sub.member(step.via)) fail("invariance multiplier " + to_string(step.via) + " is not in L");
            } else {
                if (group.multiply(step.to, Elem{step.via, 0}) != step.from)
                    fail("negative-lamp step " + to_string(step.from) + " != " + to_string(step.to) + " * via");
                if (auto top = step.via.max_position(); top && *top >= 0)
                    fail("negative-lamp multiplier " + to_string(step.via) + " has support at or above 0");
            }
        }
        if (!at.is_identity()) fail("chain for a" + std::to_string(row.value) + " does not end at e");
    }
    if (targets != lambda0) fail("rows do not cover Λ_0");
    return out;
}

inline nlohmann::json to_json(const ContradictionCertificate& cert) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : cert.rows) {
        nlohmann::json chain = nlohmann::json::array();
        for (const auto& s : row.chain)
            chain.push_back({{"rule", to_string(s.rule)},
                             {"from", to_string(s.from)},
                             {"to", to_string(s.to)},
                             {"via", to_string(s.via)}});
        rows.push_back({{"lambda", row.value},
                        {"target", to_string(row.target)},
                        {"k", row.k},
                        {"mu_L", to_string(row.in_subgroup)},
                        {"mu_minus", to_string(row.negative)},
                        {"chain", chain}});
    }
    nlohmann::json rm = nlohmann::json::array();
    for (const auto& g : cert.role_models) rm.push_back(to_string(g));
    return {{"subgroup", cert.subgroup}, {"period", cert.period}, {"ell", cert.ell},
            {"rows", rows},              {"center", to_string(cert.center)},
            {"role_models", rm},         {"conclusion", cert.conclusion}};
}

}  // namespace conformist
