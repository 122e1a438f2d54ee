#pragma once

// Backtracking search over boolean cells with unit propagation on
// two-watched literals, first-UIP clause learning and non-chronological
// backjumping.
//
// Decisions always take the lowest-numbered unassigned variable and try its
// preferred value first. There are no restarts, so with every preferred
// value 0 the first model found is the lexicographically smallest one in
// variable order (learned clauses are implied, so every trail literal is
// implied by the formula and the decisions below it).

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace conformist {

/// Literal 2v + b asserts "variable v has value b".
using Lit = std::uint32_t;

constexpr Lit make_lit(std::uint32_t var, int value) { return 2 * var + static_cast<Lit>(value != 0); }
constexpr std::uint32_t lit_var(Lit l) { return l >> 1; }
constexpr int lit_value(Lit l) { return static_cast<int>(l & 1U); }
constexpr Lit negate(Lit l) { return l ^ 1U; }

struct SolverStats {
    std::uint64_t decisions = 0;
    std::uint64_t conflicts = 0;
    std::uint64_t max_level = 0;
};

class ClauseSolver {
public:
    enum class Result { Sat, Unsat, Limit };

    ClauseSolver(std::size_t num_vars, const std::vector<std::vector<Lit>>& clauses,
                 std::vector<std::int8_t> preferred = {})
        : num_vars_(num_vars),
          preferred_(std::move(preferred)),
          assign_(num_vars, kUnassigned),
          level_(num_vars, 0),
          reason_(num_vars, kNoReason),
          seen_(num_vars, 0),
          watches_(2 * num_vars) {
        if (preferred_.empty()) preferred_.assign(num_vars, 0);
        if (preferred_.size() != num_vars) throw std::invalid_argument("solver: preferred values have wrong length");
        for (const auto& c : clauses) {
            for (Lit l : c)
                if (lit_var(l) >= num_vars) throw std::invalid_argument("solver: literal out of range");
            add_input_clause(c);
        }
    }

    /// Adds a level-0 fact. Must be called before solve().
    void assume(Lit l) {
        if (lit_var(l) >= num_vars_) throw std::invalid_argument("solver: literal out of range");
        add_input_clause({l});
    }

    Result solve(std::uint64_t decision_cap, std::uint64_t progress_interval = 0,
                 const std::function<void(std::uint64_t)>& progress = {}) {
        if (inconsistent_) return Result::Unsat;
        if (propagate() != kNoReason) return Result::Unsat;
        while (true) {
            const std::uint32_t conflict = propagate();
            if (conflict != kNoReason) {
                ++stats_.conflicts;
                if (decision_level() == 0) return Result::Unsat;
                std::vector<Lit> learnt;
                std::uint32_t back_level = 0;
                analyze(conflict, learnt, back_level);
                cancel_until(back_level);
                if (learnt.size() == 1) {
                    enqueue(learnt[0], kNoReason);
                } else {
                    const auto idx = static_cast<std::uint32_t>(clauses_.size());
                    clauses_.push_back(learnt);
                    watches_[learnt[0]].push_back(idx);
                    watches_[learnt[1]].push_back(idx);
                    enqueue(learnt[0], idx);
                }
                continue;
            }
            while (next_var_ < num_vars_ && assign_[next_var_] != kUnassigned) ++next_var_;
            if (next_var_ == num_vars_) return Result::Sat;
            if (stats_.decisions >= decision_cap) return Result::Limit;
            ++stats_.decisions;
            if (progress && progress_interval != 0 && stats_.decisions % progress_interval == 0)
                progress(stats_.decisions);
            trail_lim_.push_back(trail_.size());
            if (trail_lim_.size() > stats_.max_level) stats_.max_level = trail_lim_.size();
            enqueue(make_lit(static_cast<std::uint32_t>(next_var_), preferred_[next_var_]), kNoReason);
        }
    }

    /// Model values after a Sat result.
    std::vector<std::int8_t> model() const { return assign_; }
    const SolverStats& stats() const { return stats_; }

private:
    static constexpr std::int8_t kUnassigned = -1;
    static constexpr std::uint32_t kNoReason = 0xffffffffU;

    enum class Truth { False, True, Undef };

    Truth value(Lit l) const {
        const std::int8_t a = assign_[lit_var(l)];
        if (a == kUnassigned) return Truth::Undef;
        return a == lit_value(l) ? Truth::True : Truth::False;
    }

    std::size_t decision_level() const { return trail_lim_.size(); }

    void enqueue(Lit l, std::uint32_t reason) {
        const auto v = lit_var(l);
        assign_[v] = static_cast<std::int8_t>(lit_value(l));
        level_[v] = static_cast<std::uint32_t>(decision_level());
        reason_[v] = reason;
        trail_.push_back(l);
    }

    void add_input_clause(std::vector<Lit> c) {
        if (inconsistent_) return;
        if (c.empty()) {
            inconsistent_ = true;
            return;
        }
        if (c.size() == 1) {
            const Truth t = value(c[0]);
            if (t == Truth::False) inconsistent_ = true;
            if (t == Truth::Undef) enqueue(c[0], kNoReason);
            return;
        }
        const auto idx = static_cast<std::uint32_t>(clauses_.size());
        clauses_.push_back(std::move(c));
        watches_[clauses_[idx][0]].push_back(idx);
        watches_[clauses_[idx][1]].push_back(idx);
    }

    // Returns the index of a falsified clause, or kNoReason.
    std::uint32_t propagate() {
        while (qhead_ < trail_.size()) {
            const Lit falsified = negate(trail_[qhead_++]);
            auto& ws = watches_[falsified];
            std::size_t keep = 0;
            for (std::size_t i = 0; i < ws.size(); ++i) {
                const std::uint32_t ci = ws[i];
                auto& c = clauses_[ci];
                if (c[0] == falsified) std::swap(c[0], c[1]);
                if (value(c[0]) == Truth::True) {
                    ws[keep++] = ci;
                    continue;
                }
                bool moved = false;
                for (std::size_t k = 2; k < c.size(); ++k) {
                    if (value(c[k]) != Truth::False) {
                        std::swap(c[1], c[k]);
                        watches_[c[1]].push_back(ci);
                        moved = true;
                        break;
                    }
                }
                if (moved) continue;
                ws[keep++] = ci;
                if (value(c[0]) == Truth::False) {
                    for (std::size_t j = i + 1; j < ws.size(); ++j) ws[keep++] = ws[j];
                    ws.resize(keep);
                    qhead_ = trail_.size();
                    return ci;
                }
                enqueue(c[0], ci);
            }
            ws.resize(keep);
        }
        return kNoReason;
    }

    void analyze(std::uint32_t conflict, std::vector<Lit>& learnt, std::uint32_t& back_level) {
        learnt.assign(1, 0);
        std::size_t path = 0;
        bool have_p = false;
        Lit p = 0;
        std::size_t idx = trail_.size();
        std::uint32_t reason = conflict;
        do {
            const auto& c = clauses_[reason];
            for (std::size_t j = have_p ? 1 : 0; j < c.size(); ++j) {
                const Lit q = c[j];
                const auto v = lit_var(q);
                if (seen_[v] || level_[v] == 0) continue;
                seen_[v] = 1;
                if (level_[v] >= decision_level()) {
                    ++path;
                } else {
                    learnt.push_back(q);
                }
            }
            while (!seen_[lit_var(trail_[--idx])]) {
            }
            p = trail_[idx];
            have_p = true;
            reason = reason_[lit_var(p)];
            seen_[lit_var(p)] = 0;
            --path;
        } while (path > 0);
        learnt[0] = negate(p);

        back_level = 0;
        std::size_t max_i = 1;
        for (std::size_t i = 1; i < learnt.size(); ++i) {
            seen_[lit_var(learnt[i])] = 0;
            if (level_[lit_var(learnt[i])] > back_level) {
                back_level = level_[lit_var(learnt[i])];
                max_i = i;
            }
        }
        if (learnt.size() > 1) std::swap(learnt[1], learnt[max_i]);
    }

    void cancel_until(std::size_t level) {
        if (decision_level() <= level) return;
        for (std::size_t i = trail_.size(); i > trail_lim_[level]; --i) {
            const auto v = lit_var(trail_[i - 1]);
            assign_[v] = kUnassigned;
            reason_[v] = kNoReason;
            if (v < next_var_) next_var_ = v;
        }
        trail_.resize(trail_lim_[level]);
        trail_lim_.resize(level);
        qhead_ = trail_.size();
    }

    std::size_t num_vars_;
    std::vector<std::int8_t> preferred_;
    std::vector<std::int8_t> assign_;
    std::vector<std::uint32_t> level_;
    std::vector<std::uint32_t> reason_;
    std::vector<std::uint8_t> seen_;
    std::vector<std::vector<std::uint32_t>> watches_;
    std::vector<std::vector<Lit>> clauses_;
    std::vector<Lit> trail_;
    std::vector<std::size_t> trail_lim_;
    std::size_t qhead_ = 0;
    std::size_t next_var_ = 0;
    bool inconsistent_ = false;
    SolverStats stats_;
};

}  // namespace conformist
