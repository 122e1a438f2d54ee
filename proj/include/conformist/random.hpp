#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "conformist/lamp_group.hpp"

namespace conformist {

using Rng = std::mt19937_64;

/// Uniform lamp values at a random subset of positions in [-spread, spread].
inline Lamp random_lamp(Rng& rng, std::size_t ell, std::int64_t spread = 6) {
    std::uniform_int_distribution<GroupIndex> value(0, static_cast<GroupIndex>(ell - 1));
    std::bernoulli_distribution occupied(0.4);
    std::vector<LampEntry> entries;
    for (std::int64_t p = -spread; p <= spread; ++p)
        if (occupied(rng)) entries.push_back({p, value(rng)});
    return Lamp::from_entries(std::move(entries));
}

inline Elem random_elem(Rng& rng, std::size_t ell, std::int64_t spread = 6) {
    Lamp lamp = random_lamp(rng, ell, spread);
    std::uniform_int_distribution<std::int64_t> shift(-spread, spread);
    return {std::move(lamp), shift(rng)};
}

}  // namespace conformist
