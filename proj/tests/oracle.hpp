#pragma once

// Independent reference models used only by tests.
//
// For Λ = Z/p the lamplighter group embeds in the affine group of the
// Laurent polynomials over F_p:  μ t^k  <->  [[x^k, Σ μ_n x^n], [0, 1]].
// Products are computed as matrix products, with no reference to the
// library's normal-form arithmetic.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "conformist/conformist.hpp"

namespace oracle {

struct Affine {
    std::int64_t k = 0;                   // exponent of x in the top-left entry
    std::map<std::int64_t, std::int64_t> poly;  // top-right entry, nonzero coefficients in [1, p)

    auto operator<=>(const Affine&) const = default;
};

class AffineModel {
public:
    explicit AffineModel(std::int64_t p) : p_(p) {}

    std::int64_t p() const { return p_; }

    // [[x^a, P], [0, 1]] [[x^b, Q], [0, 1]] = [[x^{a+b}, x^a Q + P], [0, 1]]
    Affine mul(const Affine& a, const Affine& b) const {
        Affine out{a.k + b.k, a.poly};
        for (const auto& [n, c] : b.poly) add(out.poly, n + a.k, c);
        return out;
    }

    Affine inv(const Affine& a) const {
        Affine out{-a.k, {}};
        for (const auto& [n, c] : a.poly) add(out.poly, n - a.k, p_ - c);
        return out;
    }

    Affine t(std::int64_t k = 1) const { return {k, {}}; }
    Affine lamp(std::int64_t value, std::int64_t pos) const {
        Affine out;
        add(out.poly, pos, value);
        return out;
    }

    conformist::Elem to_elem(const Affine& a) const {
        std::vector<conformist::LampEntry> entries;
        for (const auto& [n, c] : a.poly) entries.push_back({n, static_cast<conformist::GroupIndex>(c)});
        return {conformist::Lamp::from_entries(std::move(entries)), a.k};
    }

    Affine from_elem(const conformist::Elem& g) const {
        Affine out{g.shift, {}};
        for (const auto& e : g.lamp.entries()) add(out.poly, e.position, e.value);
        return out;
    }

    // lamp-t generators [v]_0 t and their inverses
    std::vector<Affine> lamp_t_generators() const {
        std::set<Affine> gens;
        for (std::int64_t v = 0; v < p_; ++v) {
            const Affine g = mul(lamp(v, 0), t());
            gens.insert(g);
            gens.insert(inv(g));
        }
        return {gens.begin(), gens.end()};
    }

    std::vector<Affine> symmetric_generators() const {
        std::set<Affine> gens{t(), t(-1)};
        for (std::int64_t v = 1; v < p_; ++v) gens.insert(lamp(v, 0));
        return {gens.begin(), gens.end()};
    }

    std::size_t ball_size(std::size_t radius, const std::vector<Affine>& gens) const {
        std::set<Affine> seen{Affine{}};
        std::vector<Affine> frontier{Affine{}};
        for (std::size_t r = 0; r < radius; ++r) {
            std::vector<Affine> next;
            for (const auto& g : frontier)
                for (const auto& s : gens) {
                    Affine h = mul(g, s);
                    if (seen.insert(h).second) next.push_back(h);
                }
            frontier = std::move(next);
        }
        return seen.size();
    }

    // g t^-1 [λ]_0 for λ = 0 .. p-1
    std::vector<conformist::Elem> role_models(const conformist::Elem& g) const {
        std::vector<conformist::Elem> out;
        for (std::int64_t v = 0; v < p_; ++v) out.push_back(to_elem(mul(mul(from_elem(g), t(-1)), lamp(v, 0))));
        return out;
    }

private:
    void add(std::map<std::int64_t, std::int64_t>& poly, std::int64_t n, std::int64_t c) const {
        c %= p_;
        if (c == 0) return;
        auto& slot = poly[n];
        slot = (slot + c) % p_;
        if (slot == 0) poly.erase(n);
    }

    std::int64_t p_;
};

// Direct reading of the conformist rule: every g whose role models all lie
// in the assignment has a non-unanimous strict majority among them, equal to
// the value at g.
inline bool conformist_admissible(const std::map<conformist::Elem, int>& assignment, const AffineModel& model) {
    for (const auto& [g, value] : assignment) {
        int ones = 0, count = 0;
        for (const auto& h : model.role_models(g)) {
            auto it = assignment.find(h);
            if (it == assignment.end()) break;
            ++count;
            ones += it->second;
        }
        if (count != model.p()) continue;
        const int zeros = count - ones;
        int majority = -1;
        if (2 * ones > count && ones < count) majority = 1;
        if (2 * zeros > count && zeros < count) majority = 0;
        if (majority != value) return false;
    }
    return true;
}

// Parity of the count of digit 1 in base ell, by string conversion.
inline int digit_one_parity(std::uint64_t n, std::uint64_t ell) {
    std::vector<std::uint64_t> digits;
    do {
        digits.push_back(n % ell);
        n /= ell;
    } while (n);
    return static_cast<int>(std::count(digits.begin(), digits.end(), 1U) % 2);
}

// A random window of at most `max_cells` cells: a few elements of ball(2)
// together with their role models, padded with random ball elements.
inline std::vector<conformist::Elem> random_small_domain(conformist::Rng& rng, const conformist::Lamplighter& group,
                                                         std::size_t max_cells) {
    const auto pool = group.ball(2, group.generators(conformist::GenSet::Kind::LampT));
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    std::set<conformist::Elem> cells;
    std::uniform_int_distribution<int> centers(1, 2);
    for (int c = centers(rng); c > 0; --c) {
        const auto& g = pool[pick(rng)];
        std::set<conformist::Elem> grown = cells;
        grown.insert(g);
        for (const auto& h : group.role_models(g)) grown.insert(h);
        if (grown.size() <= max_cells) cells = std::move(grown);
    }
    std::uniform_int_distribution<std::size_t> extra(0, max_cells);
    const std::size_t target = std::max(cells.size(), extra(rng));
    while (cells.size() < target) cells.insert(pool[pick(rng)]);
    return {cells.begin(), cells.end()};
}

// Seed for trial `trial`: a few random cells, and on every third trial a
// unanimous role-model row, which no admissible completion can contain.
inline conformist::PartialConfig random_seed(conformist::Rng& rng, const conformist::Lamplighter& group,
                                             const std::vector<conformist::Elem>& domain, int trial) {
    conformist::PartialConfig seed;
    std::uniform_int_distribution<std::size_t> pick(0, domain.size() - 1);
    std::bernoulli_distribution coin(0.5);
    for (int s = trial % 3; s > 0; --s) seed.set(domain[pick(rng)], conformist::to_bit(coin(rng)));
    if (trial % 3 == 2) {
        const std::set<conformist::Elem> cells(domain.begin(), domain.end());
        for (const auto& g : domain) {
            const auto rm = group.role_models(g);
            if (!std::all_of(rm.begin(), rm.end(), [&](const auto& h) { return cells.count(h) != 0; })) continue;
            seed = {};
            const auto bit = conformist::to_bit(coin(rng));
            for (const auto& h : rm) seed.set(h, bit);
            break;
        }
    }
    return seed;
}

// Lexicographically least admissible completion of `seed`, with cells
// ordered by (|shift|, element) and 0 before 1; nullopt if none exists.
inline std::optional<std::map<conformist::Elem, int>> brute_force_lexmin(std::vector<conformist::Elem> domain,
                                                                         const std::map<conformist::Elem, int>& seed,
                                                                         const AffineModel& model) {
    std::sort(domain.begin(), domain.end(), [](const auto& a, const auto& b) {
        const auto sa = a.shift < 0 ? -a.shift : a.shift, sb = b.shift < 0 ? -b.shift : b.shift;
        return sa != sb ? sa < sb : a < b;
    });
    const std::size_t n = domain.size();
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
        std::map<conformist::Elem, int> assignment;
        bool matches_seed = true;
        for (std::size_t i = 0; i < n; ++i) {
            const int v = static_cast<int>((x >> (n - 1 - i)) & 1U);
            assignment[domain[i]] = v;
            if (auto it = seed.find(domain[i]); it != seed.end() && it->second != v) matches_seed = false;
        }
        if (matches_seed && conformist_admissible(assignment, model)) return assignment;
    }
    return std::nullopt;
}

}  // namespace oracle
