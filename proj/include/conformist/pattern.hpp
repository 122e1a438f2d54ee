#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "conformist/lamp_group.hpp"

namespace conformist {

enum class Bit : std::uint8_t { Zero = 0, One = 1 };

constexpr Bit to_bit(int v) { return v == 0 ? Bit::Zero : Bit::One; }
constexpr int to_int(Bit b) { return static_cast<int>(b); }
constexpr Bit flip(Bit b) { return b == Bit::Zero ? Bit::One : Bit::Zero; }
constexpr char to_char(Bit b) { return b == Bit::Zero ? '0' : '1'; }

using BitWord = std::vector<Bit>;

inline std::string to_string(const BitWord& w) {
    std::string out;
    out.reserve(w.size());
    for (Bit b : w) out.push_back(to_char(b));
    return out;
}

inline BitWord word_from_string(std::string_view s) {
    BitWord out;
    out.reserve(s.size());
    for (char c : s) {
        if (c != '0' && c != '1') throw std::invalid_argument("bit word may only contain 0 and 1");
        out.push_back(c == '0' ? Bit::Zero : Bit::One);
    }
    return out;
}

struct PatternCell {
    Elem elem;
    Bit bit = Bit::Zero;

    friend bool operator==(const PatternCell&, const PatternCell&) = default;
};

/// A function from a finite nonempty subset F ⊆ G to {0,1}; cells are kept
/// sorted by the Elem order.
class Pattern {
public:
    explicit Pattern(std::vector<PatternCell> cells) : cells_(std::move(cells)) {
        if (cells_.empty()) throw std::invalid_argument("pattern: domain must be nonempty");
        std::sort(cells_.begin(), cells_.end(), [](const auto& a, const auto& b) { return a.elem < b.elem; });
        for (std::size_t i = 1; i < cells_.size(); ++i)
            if (cells_[i].elem == cells_[i - 1].elem) throw std::invalid_argument("pattern: duplicate domain element");
    }

    const std::vector<PatternCell>& cells() const { return cells_; }
    std::size_t size() const { return cells_.size(); }

    std::vector<Elem> support() const {
        std::vector<Elem> out;
        out.reserve(cells_.size());
        for (const auto& c : cells_) out.push_back(c.elem);
        return out;
    }

    friend bool operator==(const Pattern&, const Pattern&) = default;

private:
    std::vector<PatternCell> cells_;
};

/// A finite window σ|_D of a configuration. Lookups outside D are unknown.
class PartialConfig {
public:
    PartialConfig() = default;

    void set(const Elem& g, Bit b) { cells_[g] = b; }
    void erase(const Elem& g) { cells_.erase(g); }

    std::optional<Bit> get(const Elem& g) const {
        auto it = cells_.find(g);
        if (it == cells_.end()) return std::nullopt;
        return it->second;
    }
    bool contains(const Elem& g) const { return cells_.count(g) != 0; }
    std::size_t size() const { return cells_.size(); }
    bool empty() const { return cells_.empty(); }

    const std::map<Elem, Bit>& cells() const { return cells_; }
    auto begin() const { return cells_.begin(); }
    auto end() const { return cells_.end(); }

    friend bool operator==(const PartialConfig&, const PartialConfig&) = default;

private:
    std::map<Elem, Bit> cells_;
};

}  // namespace conformist
