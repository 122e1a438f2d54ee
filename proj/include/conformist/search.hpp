#pragma once

// Completion search for forbidden-pattern SFTs on finite windows.
//
// Every translate of a forbidden pattern that fits in the window becomes a
// clause "some cell differs from the pattern". Cells are ordered by
// (|shift|, Elem order) so role-model chains are assigned parents first.
//
// The top `split_depth` free variables are split into 2^split_depth
// subproblems, solved independently and combined in lexicographic order.
// The split does not depend on the worker count, so status, witness and
// stats are identical for any number of workers.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <vector>

#include "conformist/clause_solver.hpp"
#include "conformist/lamp_group.hpp"
#include "conformist/notation.hpp"
#include "conformist/pattern.hpp"
#include "conformist/sft_engine.hpp"
#include "conformist/subshift.hpp"
#include "conformist/union_find.hpp"

namespace conformist {

struct SearchLimits {
    std::uint64_t node_cap = 100'000'000;
    std::uint64_t progress_interval = 1'000'000;
    /// Called with the running node count of the current subproblem; may be
    /// invoked from worker threads.
    std::function<void(std::uint64_t)> progress;
    unsigned workers = 1;
    unsigned split_depth = 3;
    /// Try σ₀'s value before the other one at each decision.
    bool sigma0_hint = false;
};

enum class SearchStatus { Sat, Unsat, ResourceLimit };

inline const char* to_string(SearchStatus s) {
    switch (s) {
        case SearchStatus::Sat: return "SAT";
        case SearchStatus::Unsat: return "UNSAT";
        case SearchStatus::ResourceLimit: return "RESOURCE_LIMIT";
    }
    return "?";
}

struct SearchStats {
    std::uint64_t nodes = 0;
    std::uint64_t max_depth = 0;
    std::uint64_t conflicts = 0;
    std::size_t cells = 0;
    std::size_t variables = 0;
    std::size_t clauses = 0;
    std::size_t subproblems = 0;
};

struct SearchOutcome {
    SearchStatus status = SearchStatus::Unsat;
    std::optional<PartialConfig> witness;
    SearchStats stats;
    double wall_ms = 0.0;
};

/// Cells sorted by (|shift|, Elem order).
inline std::vector<Elem> search_order(std::vector<Elem> domain) {
    std::sort(domain.begin(), domain.end(), [](const Elem& a, const Elem& b) {
        const auto sa = a.shift < 0 ? -a.shift : a.shift, sb = b.shift < 0 ? -b.shift : b.shift;
        if (sa != sb) return sa < sb;
        return a < b;
    });
    domain.erase(std::unique(domain.begin(), domain.end()), domain.end());
    return domain;
}

namespace detail {

using CellIndex = std::unordered_map<Elem, std::size_t, ElemHash>;

inline CellIndex index_cells(const std::vector<Elem>& cells) {
    CellIndex index;
    index.reserve(cells.size() * 2);
    for (std::size_t i = 0; i < cells.size(); ++i) index.emplace(cells[i], i);
    return index;
}

/// Clauses over variables var_of[cell] for every forbidden translate inside the window.
inline std::vector<std::vector<Lit>> ground_clauses(const SftSpec& spec, const std::vector<Elem>& cells,
                                                    const CellIndex& index, const std::vector<std::uint32_t>& var_of) {
    const auto& group = spec.group();
    std::vector<std::vector<Lit>> clauses;
    for (const auto& [support, indices] : patterns_by_support(spec)) {
        const auto translates =
            full_translates(support, cells, group, [&](const Elem& h) { return index.count(h) != 0; });
        for (const auto& g : translates) {
            std::vector<std::uint32_t> vars;
            for (const auto& f : support) vars.push_back(var_of[index.at(group.multiply(g, f))]);
            for (std::size_t idx : indices) {
                const auto& cells_p = spec.patterns()[idx].cells();
                std::vector<Lit> clause;
                bool tautology = false;
                for (std::size_t i = 0; i < cells_p.size(); ++i) {
                    const Lit l = make_lit(vars[i], 1 - to_int(cells_p[i].bit));
                    if (std::find(clause.begin(), clause.end(), negate(l)) != clause.end()) tautology = true;
                    if (std::find(clause.begin(), clause.end(), l) == clause.end()) clause.push_back(l);
                }
                if (!tautology) clauses.push_back(std::move(clause));
            }
        }
    }
    return clauses;
}

struct SubResult {
    ClauseSolver::Result result = ClauseSolver::Result::Unsat;
    std::vector<std::int8_t> model;
    SolverStats stats;
};

struct GroundedProblem {
    std::size_t num_vars = 0;
    std::vector<std::vector<Lit>> clauses;
    std::vector<Lit> facts;
    std::vector<std::int8_t> preferred;
};

inline SubResult solve_prefix(const GroundedProblem& problem, const std::vector<std::uint32_t>& split_vars,
                              std::size_t prefix, const SearchLimits& limits) {
    ClauseSolver solver(problem.num_vars, problem.clauses, problem.preferred);
    for (Lit l : problem.facts) solver.assume(l);
    const std::size_t k = split_vars.size();
    for (std::size_t j = 0; j < k; ++j) {
        // most significant bit first, in the preferred-value-first order
        const int bit = static_cast<int>((prefix >> (k - 1 - j)) & 1U);
        const int value = bit ^ problem.preferred[split_vars[j]];
        solver.assume(make_lit(split_vars[j], value));
    }
    SubResult out;
    out.result = solver.solve(limits.node_cap, limits.progress_interval, limits.progress);
    out.stats = solver.stats();
    if (out.result == ClauseSolver::Result::Sat) out.model = solver.model();
    return out;
}

inline SearchOutcome solve_grounded(const GroundedProblem& problem, const SearchLimits& limits,
                                    std::vector<std::int8_t>& model) {
    std::vector<bool> fixed(problem.num_vars, false);
    for (Lit l : problem.facts) fixed[lit_var(l)] = true;
    std::vector<std::uint32_t> split_vars;
    for (std::uint32_t v = 0; v < problem.num_vars && split_vars.size() < limits.split_depth; ++v)
        if (!fixed[v]) split_vars.push_back(v);
    const std::size_t count = std::size_t{1} << split_vars.size();

    std::vector<std::optional<SubResult>> results(count);
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> stop_at{count};  // lowest subproblem known to be decisive
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count || i > stop_at.load()) return;
            results[i] = solve_prefix(problem, split_vars, i, limits);
            if (results[i]->result != ClauseSolver::Result::Unsat) {
                std::size_t cur = stop_at.load();
                while (i < cur && !stop_at.compare_exchange_weak(cur, i)) {
                }
            }
        }
    };
    const unsigned workers = std::max(1U, std::min<unsigned>(limits.workers, static_cast<unsigned>(count)));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    SearchOutcome out;
    out.stats.variables = problem.num_vars;
    out.stats.clauses = problem.clauses.size();
    std::uint64_t nodes = 0;
    for (std::size_t i = 0; i < count; ++i) {
        const SubResult& r = *results[i];
        ++out.stats.subproblems;
        nodes += r.stats.decisions;
        out.stats.conflicts += r.stats.conflicts;
        out.stats.max_depth = std::max(out.stats.max_depth, r.stats.max_level);
        if (r.result == ClauseSolver::Result::Limit || nodes > limits.node_cap) {
            out.status = SearchStatus::ResourceLimit;
            break;
        }
        if (r.result == ClauseSolver::Result::Sat) {
            out.status = SearchStatus::Sat;
            model = r.model;
            break;
        }
    }
    out.stats.nodes = nodes;
    return out;
}

inline std::vector<std::int8_t> preferred_values(const std::vector<Elem>& representatives, const SftSpec& spec,
                                                 bool hint) {
    std::vector<std::int8_t> out(representatives.size(), 0);
    if (hint)
        for (std::size_t i = 0; i < representatives.size(); ++i)
            out[i] = static_cast<std::int8_t>(to_int(sigma0(representatives[i], spec.group())));
    return out;
}

template <class Clock = std::chrono::steady_clock>
double elapsed_ms(typename Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace detail

/// Completes `seed` to an admissible assignment on `domain`.
inline SearchOutcome complete_search(const PartialConfig& seed, const std::vector<Elem>& domain, const SftSpec& spec,
                                     const SearchLimits& limits = {}) {
    const auto start = std::chrono::steady_clock::now();
    const auto cells = search_order(domain);
    const auto index = detail::index_cells(cells);
    for (const auto& [g, b] : seed)
        if (!index.count(g)) throw std::invalid_argument("complete_search: seed cell " + to_string(g) + " outside domain");

    std::vector<std::uint32_t> var_of(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) var_of[i] = static_cast<std::uint32_t>(i);

    detail::GroundedProblem problem;
    problem.num_vars = cells.size();
    problem.clauses = detail::ground_clauses(spec, cells, index, var_of);
    for (const auto& [g, b] : seed) problem.facts.push_back(make_lit(var_of[index.at(g)], to_int(b)));
    problem.preferred = detail::preferred_values(cells, spec, limits.sigma0_hint);

    std::vector<std::int8_t> model;
    SearchOutcome out = detail::solve_grounded(problem, limits, model);
    out.stats.cells = cells.size();
    if (out.status == SearchStatus::Sat) {
        PartialConfig witness;
        for (std::size_t i = 0; i < cells.size(); ++i) witness.set(cells[i], to_bit(model[var_of[i]]));
        if (!is_admissible(witness, spec).admissible)
            throw std::logic_error("complete_search: witness failed admissibility check");
        out.witness = std::move(witness);
    }
    out.wall_ms = detail::elapsed_ms(start);
    return out;
}

/// Cell classes of `domain` under the partial left action of the generators
/// and their inverses; moves leaving the domain are ignored.
inline std::vector<std::vector<Elem>> orbit_classes(const std::vector<Elem>& domain,
                                                    const std::vector<Elem>& subgroup_gens,
                                                    const Lamplighter& group) {
    const auto cells = search_order(domain);
    const auto index = detail::index_cells(cells);
    std::vector<Elem> moves;
    for (const auto& g : subgroup_gens) {
        moves.push_back(g);
        moves.push_back(group.inverse(g));
    }
    UnionFind uf(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i)
        for (const auto& m : moves)
            if (auto it = index.find(group.multiply(m, cells[i])); it != index.end()) uf.unite(i, it->second);

    std::unordered_map<std::size_t, std::size_t> class_of_root;
    std::vector<std::vector<Elem>> classes;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        auto [it, fresh] = class_of_root.emplace(uf.find(i), classes.size());
        if (fresh) classes.emplace_back();
        classes[it->second].push_back(cells[i]);
    }
    return classes;
}

/// Searches for an admissible assignment on `domain` that is constant on the
/// classes of the partial action of ⟨subgroup_gens⟩.
inline SearchOutcome invariant_search(const SftSpec& spec, const std::vector<Elem>& subgroup_gens,
                                      const std::vector<Elem>& domain, const SearchLimits& limits = {}) {
    if (subgroup_gens.empty()) throw std::invalid_argument("invariant_search: subgroup generators must be nonempty");
    const auto start = std::chrono::steady_clock::now();
    const auto cells = search_order(domain);
    const auto index = detail::index_cells(cells);
    const auto classes = orbit_classes(cells, subgroup_gens, spec.group());

    std::vector<std::uint32_t> var_of(cells.size());
    std::vector<Elem> representatives;
    for (std::size_t c = 0; c < classes.size(); ++c) {
        representatives.push_back(classes[c].front());
        for (const auto& g : classes[c]) var_of[index.at(g)] = static_cast<std::uint32_t>(c);
    }

    detail::GroundedProblem problem;
    problem.num_vars = classes.size();
    problem.clauses = detail::ground_clauses(spec, cells, index, var_of);
    problem.preferred = detail::preferred_values(representatives, spec, limits.sigma0_hint);

    std::vector<std::int8_t> model;
    SearchOutcome out = detail::solve_grounded(problem, limits, model);
    out.stats.cells = cells.size();
    if (out.status == SearchStatus::Sat) {
        PartialConfig witness;
        for (std::size_t i = 0; i < cells.size(); ++i) witness.set(cells[i], to_bit(model[var_of[i]]));
        if (!is_admissible(witness, spec).admissible)
            throw std::logic_error("invariant_search: witness failed admissibility check");
        out.witness = std::move(witness);
    }
    out.wall_ms = detail::elapsed_ms(start);
    return out;
}

}  // namespace conformist
