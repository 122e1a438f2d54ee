#pragma once

// Lamplighter groups G = (⊕_Z Λ) ⋊ Z over an explicit finite group Λ.
//
// Elements are kept in the normal form μ t^k: a finitely supported lamp
// configuration μ together with the exponent k of the shift generator t.
// Conjugation by t moves lamps one position up: t [λ]_i t^-1 = [λ]_{i+1}.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace conformist {

/// Index into the fixed enumeration α_0, ..., α_{ℓ-1} of Λ. The index is
/// also the weight ‖α_i‖ = i used by the horizontal coordinate.
using GroupIndex = std::uint32_t;

class ResourceLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A finite group given by its multiplication table.
///
/// The identity must be enumerated first. Tables are validated on
/// construction (closure, identity, inverses, associativity).
class FiniteGroupTable {
public:
    FiniteGroupTable(std::vector<std::vector<GroupIndex>> mult, std::vector<GroupIndex> inv,
                     GroupIndex identity, std::string label = {})
        : mult_(std::move(mult)), inv_(std::move(inv)), label_(std::move(label)) {
        const std::size_t n = mult_.size();
        if (n == 0) throw std::invalid_argument("group table: order must be positive");
        if (identity != 0)
            throw std::invalid_argument("group table: identity must be enumerated first (index 0)");
        if (inv_.size() != n) throw std::invalid_argument("group table: inverse table has wrong length");
        for (const auto& row : mult_) {
            if (row.size() != n) throw std::invalid_argument("group table: multiplication table is not square");
            for (GroupIndex v : row)
                if (v >= n) throw std::invalid_argument("group table: entry out of range");
        }
        for (GroupIndex a = 0; a < n; ++a) {
            if (mult_[0][a] != a || mult_[a][0] != a)
                throw std::invalid_argument("group table: index 0 is not a two-sided identity");
            if (inv_[a] >= n || mult_[a][inv_[a]] != 0 || mult_[inv_[a]][a] != 0)
                throw std::invalid_argument("group table: inverse table is wrong at " + std::to_string(a));
        }
        for (GroupIndex a = 0; a < n; ++a)
            for (GroupIndex b = 0; b < n; ++b)
                for (GroupIndex c = 0; c < n; ++c)
                    if (mult_[mult_[a][b]][c] != mult_[a][mult_[b][c]])
                        throw std::invalid_argument("group table: multiplication is not associative");
    }

    /// Z/m with α_i = i under addition.
    static FiniteGroupTable cyclic(std::uint32_t m) {
        if (m == 0) throw std::invalid_argument("cyclic group order must be positive");
        std::vector<std::vector<GroupIndex>> mult(m, std::vector<GroupIndex>(m));
        std::vector<GroupIndex> inv(m);
        for (GroupIndex a = 0; a < m; ++a) {
            for (GroupIndex b = 0; b < m; ++b) mult[a][b] = (a + b) % m;
            inv[a] = (m - a) % m;
        }
        return FiniteGroupTable(std::move(mult), std::move(inv), 0, "cyclic:" + std::to_string(m));
    }

    /// A × B with (a, b) enumerated as a·|B| + b, so the identity stays first.
    static FiniteGroupTable product(const FiniteGroupTable& a, const FiniteGroupTable& b) {
        const std::size_t na = a.order(), nb = b.order();
        const std::size_t n = na * nb;
        std::vector<std::vector<GroupIndex>> mult(n, std::vector<GroupIndex>(n));
        std::vector<GroupIndex> inv(n);
        for (std::size_t x = 0; x < n; ++x) {
            const auto xa = static_cast<GroupIndex>(x / nb), xb = static_cast<GroupIndex>(x % nb);
            inv[x] = static_cast<GroupIndex>(a.inverse(xa) * nb + b.inverse(xb));
            for (std::size_t y = 0; y < n; ++y) {
                const auto ya = static_cast<GroupIndex>(y / nb), yb = static_cast<GroupIndex>(y % nb);
                mult[x][y] = static_cast<GroupIndex>(a.mul(xa, ya) * nb + b.mul(xb, yb));
            }
        }
        return FiniteGroupTable(std::move(mult), std::move(inv), 0,
                                "product:" + a.label() + "x" + b.label());
    }

    std::size_t order() const { return mult_.size(); }
    GroupIndex identity() const { return 0; }
    GroupIndex mul(GroupIndex a, GroupIndex b) const { return mult_[a][b]; }
    GroupIndex inverse(GroupIndex a) const { return inv_[a]; }
    const std::vector<std::vector<GroupIndex>>& mult_table() const { return mult_; }
    const std::vector<GroupIndex>& inv_table() const { return inv_; }

    /// Textual Λ spec this table was built from; empty for raw tables.
    const std::string& label() const { return label_; }

    bool is_abelian() const {
        for (GroupIndex a = 0; a < order(); ++a)
            for (GroupIndex b = a + 1; b < order(); ++b)
                if (mult_[a][b] != mult_[b][a]) return false;
        return true;
    }

    friend bool operator==(const FiniteGroupTable& x, const FiniteGroupTable& y) {
        return x.mult_ == y.mult_ && x.inv_ == y.inv_;
    }

private:
    std::vector<std::vector<GroupIndex>> mult_;
    std::vector<GroupIndex> inv_;
    std::string label_;
};

struct LampEntry {
    std::int64_t position = 0;
    GroupIndex value = 0;

    friend auto operator<=>(const LampEntry&, const LampEntry&) = default;
    friend bool operator==(const LampEntry&, const LampEntry&) = default;
};

/// A finitely supported function Z -> Λ. Entries are sorted by position and
/// never hold the identity, so equal lamps have equal entry lists.
class Lamp {
public:
    Lamp() = default;

    /// Builds a lamp from arbitrary (position, value) pairs; values at the
    /// same position must not repeat. Identity values are dropped.
    static Lamp from_entries(std::vector<LampEntry> entries) {
        std::sort(entries.begin(), entries.end());
        Lamp out;
        for (const auto& e : entries) {
            if (!out.entries_.empty() && out.entries_.back().position == e.position)
                throw std::invalid_argument("lamp: duplicate position " + std::to_string(e.position));
            if (e.value != 0) out.entries_.push_back(e);
        }
        return out;
    }

    static Lamp single(GroupIndex value, std::int64_t position) {
        Lamp out;
        if (value != 0) out.entries_.push_back({position, value});
        return out;
    }

    const std::vector<LampEntry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    std::size_t support_size() const { return entries_.size(); }

    /// Coordinate (μ)_i.
    GroupIndex at(std::int64_t position) const {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), position,
                                   [](const LampEntry& e, std::int64_t p) { return e.position < p; });
        return (it != entries_.end() && it->position == position) ? it->value : 0;
    }

    std::optional<std::int64_t> min_position() const {
        if (entries_.empty()) return std::nullopt;
        return entries_.front().position;
    }
    std::optional<std::int64_t> max_position() const {
        if (entries_.empty()) return std::nullopt;
        return entries_.back().position;
    }

    /// t^k μ t^-k: every position moves up by k.
    Lamp shifted(std::int64_t k) const {
        Lamp out = *this;
        for (auto& e : out.entries_) e.position += k;
        return out;
    }

    /// Coordinatewise product μ·ν in Λ.
    Lamp multiplied(const Lamp& other, const FiniteGroupTable& table) const {
        Lamp out;
        out.entries_.reserve(entries_.size() + other.entries_.size());
        auto a = entries_.begin(), b = other.entries_.begin();
        while (a != entries_.end() || b != other.entries_.end()) {
            if (b == other.entries_.end() || (a != entries_.end() && a->position < b->position)) {
                out.entries_.push_back(*a++);
            } else if (a == entries_.end() || b->position < a->position) {
                out.entries_.push_back(*b++);
            } else {
                const GroupIndex v = table.mul(a->value, b->value);
                if (v != 0) out.entries_.push_back({a->position, v});
                ++a;
                ++b;
            }
        }
        return out;
    }

    Lamp inverted(const FiniteGroupTable& table) const {
        Lamp out = *this;
        for (auto& e : out.entries_) e.value = table.inverse(e.value);
        return out;
    }

    friend auto operator<=>(const Lamp&, const Lamp&) = default;
    friend bool operator==(const Lamp&, const Lamp&) = default;

private:
    std::vector<LampEntry> entries_;
};

/// Group element μ t^k in normal form. Ordered lexicographically by
/// (shift, lamp entries).
struct Elem {
    Lamp lamp;
    std::int64_t shift = 0;

    static Elem identity() { return {}; }
    static Elem t_power(std::int64_t k) { return {Lamp{}, k}; }
    bool is_identity() const { return shift == 0 && lamp.empty(); }

    friend bool operator==(const Elem&, const Elem&) = default;
    friend std::strong_ordering operator<=>(const Elem& a, const Elem& b) {
        if (auto c = a.shift <=> b.shift; c != 0) return c;
        return a.lamp <=> b.lamp;
    }
};

struct ElemHash {
    std::size_t operator()(const Elem& g) const noexcept {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(g.shift);
        for (const auto& e : g.lamp.entries()) {
            h ^= static_cast<std::uint64_t>(e.position) * 0xff51afd7ed558ccdULL + e.value + (h << 6) + (h >> 2);
            h *= 0xc4ceb9fe1a85ec53ULL;
        }
        return static_cast<std::size_t>(h ^ (h >> 29));
    }
};

using ElemSet = std::unordered_set<Elem, ElemHash>;

/// Generators used for ball enumeration; closed under inverses.
class GenSet {
public:
    enum class Kind { LampT, Symmetric };

    GenSet() = default;

    const std::vector<Elem>& elements() const { return gens_; }
    std::size_t size() const { return gens_.size(); }

    /// The generators as supplied, before inverses were added.
    std::vector<Elem> base() const { return {gens_.begin(), gens_.begin() + static_cast<std::ptrdiff_t>(base_count_)}; }

    friend class Lamplighter;

private:
    std::vector<Elem> gens_;
    std::size_t base_count_ = 0;
};

/// Arithmetic in G = (⊕_Z Λ) ⋊ Z for a fixed Λ.
class Lamplighter {
public:
    static constexpr std::size_t kDefaultElementCap = 10'000'000;

    explicit Lamplighter(FiniteGroupTable table) : table_(std::move(table)) {}

    const FiniteGroupTable& table() const { return table_; }
    std::size_t ell() const { return table_.order(); }

    /// (μ t^k)(ν t^j) = (μ · t^k ν t^-k) t^{k+j}
    Elem multiply(const Elem& a, const Elem& b) const {
        return {a.lamp.multiplied(b.lamp.shifted(a.shift), table_), a.shift + b.shift};
    }

    /// (μ t^k)^-1 = t^-k μ^-1 = (t^-k μ^-1 t^k) t^-k
    Elem inverse(const Elem& g) const { return {g.lamp.inverted(table_).shifted(-g.shift), -g.shift}; }

    /// [λ]_i as a group element.
    Elem lamp_embed(GroupIndex value, std::int64_t position) const {
        check_index(value);
        return {Lamp::single(value, position), 0};
    }

    Elem product(std::initializer_list<Elem> factors) const {
        Elem acc;
        for (const auto& f : factors) acc = multiply(acc, f);
        return acc;
    }

    /// g^n for any integer n.
    Elem power(const Elem& g, std::int64_t n) const {
        const Elem base = n < 0 ? inverse(g) : g;
        Elem acc;
        for (std::int64_t i = 0; i < (n < 0 ? -n : n); ++i) acc = multiply(acc, base);
        return acc;
    }

    /// The right coset g t^-1 Λ_0, listed in enumeration order of λ.
    std::vector<Elem> role_models(const Elem& g) const {
        std::vector<Elem> out;
        out.reserve(ell());
        const Elem stepped = multiply(g, Elem::t_power(-1));
        for (GroupIndex v = 0; v < ell(); ++v) out.push_back(multiply(stepped, lamp_embed(v, 0)));
        return out;
    }

    /// {[λ]_0 t : λ ∈ Λ} or {t} ∪ (Λ_0 \ {1}), then closed under inverses.
    GenSet generators(GenSet::Kind kind) const {
        std::vector<Elem> base;
        if (kind == GenSet::Kind::LampT) {
            for (GroupIndex v = 0; v < ell(); ++v) base.push_back(multiply(lamp_embed(v, 0), Elem::t_power(1)));
        } else {
            base.push_back(Elem::t_power(1));
            for (GroupIndex v = 1; v < ell(); ++v) base.push_back(lamp_embed(v, 0));
        }
        return make_genset(base);
    }

    /// Closes `base` under inverses, dropping duplicates and the identity.
    GenSet make_genset(const std::vector<Elem>& base) const {
        GenSet out;
        std::set<Elem> seen;
        auto add = [&](const Elem& g) {
            if (!g.is_identity() && seen.insert(g).second) out.gens_.push_back(g);
        };
        for (const auto& g : base) add(g);
        out.base_count_ = out.gens_.size();
        for (const auto& g : base) add(inverse(g));
        return out;
    }

    /// All products of at most `radius` generators (right multiplication),
    /// sorted by the Elem order.
    std::vector<Elem> ball(std::size_t radius, const GenSet& gens,
                           std::size_t element_cap = kDefaultElementCap) const {
        ElemSet seen{Elem::identity()};
        std::vector<Elem> frontier{Elem::identity()};
        for (std::size_t r = 0; r < radius && !frontier.empty(); ++r) {
            std::vector<Elem> next;
            for (const auto& g : frontier) {
                for (const auto& s : gens.elements()) {
                    Elem h = multiply(g, s);
                    if (seen.insert(h).second) {
                        if (seen.size() > element_cap)
                            throw ResourceLimitError("ball enumeration exceeded element cap of " +
                                                     std::to_string(element_cap));
                        next.push_back(std::move(h));
                    }
                }
            }
            frontier = std::move(next);
        }
        std::vector<Elem> out(seen.begin(), seen.end());
        std::sort(out.begin(), out.end());
        return out;
    }

    void check_index(GroupIndex value) const {
        if (value >= ell())
            throw std::invalid_argument("group index " + std::to_string(value) + " out of range for order " +
                                        std::to_string(ell()));
    }

private:
    FiniteGroupTable table_;
};

}  // namespace conformist
