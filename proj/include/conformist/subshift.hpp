#pragma once

// Defining data of the conformist subshift on a lamplighter group:
// non-unanimous strict majorities, the digit-parity sequence b_ℓ, the
// substitution π_ℓ, the horizontal coordinate 𝔫, the configuration
// σ₀ = b_ℓ ∘ 𝔫 and the explicit forbidden-pattern list.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "conformist/lamp_group.hpp"
#include "conformist/pattern.hpp"

namespace conformist {

using BigInt = boost::multiprecision::cpp_int;

/// The value held by more than half but not all of `bits`, if any.
inline std::optional<Bit> maj(std::span<const Bit> bits) {
    if (bits.empty()) throw std::invalid_argument("maj: empty multiset");
    std::size_t ones = 0;
    for (Bit b : bits) ones += (b == Bit::One);
    const std::size_t n = bits.size();
    const std::size_t zeros = n - ones;
    if (2 * ones > n && ones < n) return Bit::One;
    if (2 * zeros > n && zeros < n) return Bit::Zero;
    return std::nullopt;
}

inline std::optional<Bit> maj(std::initializer_list<Bit> bits) {
    return maj(std::span<const Bit>(bits.begin(), bits.size()));
}

inline void require_ell(std::uint64_t ell) {
    if (ell < 3)
        throw std::invalid_argument("ℓ = " + std::to_string(ell) +
                                    " < 3: no non-unanimous strict majority exists on fewer than 3 cells");
}

/// Parity of the number of digits equal to 1 in the base-ℓ expansion of n.
template <class UInt>
Bit b_ell(UInt n, std::uint64_t ell) {
    require_ell(ell);
    const UInt base = static_cast<UInt>(ell);
    unsigned ones = 0;
    while (n != 0) {
        if (n % base == 1) ++ones;
        n /= base;
    }
    return to_bit(ones & 1U);
}

/// Base-ℓ digits of n, most significant first; {0} for n = 0.
template <class UInt>
std::vector<std::uint64_t> base_digits(UInt n, std::uint64_t ell) {
    const UInt base = static_cast<UInt>(ell);
    std::vector<std::uint64_t> digits;
    do {
        digits.insert(digits.begin(), static_cast<std::uint64_t>(n % base));
        n /= base;
    } while (n != 0);
    return digits;
}

/// 0 -> 0 1 0^{ℓ-2}, 1 -> 1 0 1^{ℓ-2}, applied letterwise.
inline BitWord pi_ell(const BitWord& w, std::uint64_t ell) {
    require_ell(ell);
    BitWord out;
    out.reserve(w.size() * ell);
    for (Bit b : w) {
        out.push_back(b);
        out.push_back(flip(b));
        for (std::uint64_t j = 2; j < ell; ++j) out.push_back(b);
    }
    return out;
}

inline BitWord pi_ell_iterate(BitWord w, std::uint64_t ell, std::size_t times) {
    for (std::size_t i = 0; i < times; ++i) w = pi_ell(w, ell);
    return w;
}

/// 𝔫(μ t^k) = Σ_{n ≥ k} ‖(μ)_n‖ ℓ^{n-k}, exactly.
inline BigInt nnn(const Elem& g, std::size_t ell) {
    BigInt total = 0;
    BigInt place = 1;
    std::int64_t at = g.shift;
    for (const auto& e : g.lamp.entries()) {
        if (e.position < g.shift) continue;
        while (at < e.position) {
            place *= ell;
            ++at;
        }
        total += place * e.value;
    }
    return total;
}

inline BigInt nnn(const Elem& g, const Lamplighter& group) { return nnn(g, group.ell()); }

inline Bit sigma0(const Elem& g, const Lamplighter& group) { return b_ell(nnn(g, group), group.ell()); }

/// 𝔫 evaluated on each role model of g, in enumeration order.
inline std::vector<BigInt> rm_images(const Elem& g, const Lamplighter& group) {
    std::vector<BigInt> out;
    for (const auto& h : group.role_models(g)) out.push_back(nnn(h, group));
    return out;
}

/// The pattern support {1} ∪ t^-1 Λ_0 as (identity, t^-1[α_0]_0, ..., t^-1[α_{ℓ-1}]_0).
inline std::vector<Elem> conformist_support(std::size_t ell) {
    std::vector<Elem> out{Elem::identity()};
    for (GroupIndex v = 0; v < ell; ++v) out.push_back({Lamp::single(v, -1), -1});
    return out;
}

namespace detail {

// mask bit 0 = center, bit i+1 = role model t^-1[α_i]_0
inline Pattern conformist_pattern(std::size_t ell, std::uint64_t mask) {
    const auto support = conformist_support(ell);
    std::vector<PatternCell> cells;
    for (std::size_t i = 0; i < support.size(); ++i) cells.push_back({support[i], to_bit((mask >> i) & 1U)});
    return Pattern(std::move(cells));
}

inline bool conformist_allows(std::size_t ell, std::uint64_t mask) {
    std::vector<Bit> row;
    for (std::size_t i = 0; i < ell; ++i) row.push_back(to_bit((mask >> (i + 1)) & 1U));
    const auto m = maj(row);
    return m && *m == to_bit(mask & 1U);
}

inline void require_pattern_ell(std::size_t ell) {
    require_ell(ell);
    if (ell > 24) throw std::invalid_argument("explicit pattern lists are limited to ℓ ≤ 24");
}

}  // namespace detail

/// Every assignment on {1} ∪ t^-1 Λ_0 whose role-model row lacks a NUSM or
/// whose majority differs from the center.
inline std::vector<Pattern> forbidden_patterns(std::size_t ell) {
    detail::require_pattern_ell(ell);
    std::vector<Pattern> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (ell + 1)); ++mask)
        if (!detail::conformist_allows(ell, mask)) out.push_back(detail::conformist_pattern(ell, mask));
    return out;
}

inline std::vector<Pattern> allowed_patterns(std::size_t ell) {
    detail::require_pattern_ell(ell);
    std::vector<Pattern> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (ell + 1)); ++mask)
        if (detail::conformist_allows(ell, mask)) out.push_back(detail::conformist_pattern(ell, mask));
    return out;
}

/// Elements g of the window whose role models all lie in the window but
/// where cfg|RM(g) has no NUSM or its majority differs from cfg(g).
inline std::vector<Elem> conformist_violations(const PartialConfig& cfg, const Lamplighter& group) {
    std::vector<Elem> out;
    for (const auto& [g, center] : cfg) {
        std::vector<Bit> row;
        for (const auto& h : group.role_models(g)) {
            const auto b = cfg.get(h);
            if (!b) break;
            row.push_back(*b);
        }
        if (row.size() != group.ell()) continue;
        const auto m = maj(row);
        if (!m || *m != center) out.push_back(g);
    }
    return out;
}

}  // namespace conformist
