#pragma once

// conformist command-line driver.
//
// Exit codes: 0 success, 1 property failure, 2 usage or parse error,
// 3 resource limit.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "conformist/conformist.hpp"

namespace conformist::cli {

enum ExitCode : int { kOk = 0, kPropertyFailure = 1, kUsage = 2, kResourceLimit = 3 };

struct RunConfig {
    std::string lambda = "cyclic:3";
    std::optional<std::size_t> radius;
    std::string genset = "lamp-t";
    std::string format;
    std::uint64_t seed = 20240601;
    std::uint64_t node_cap = 100'000'000;
    unsigned workers = 1;
    std::size_t element_cap = Lamplighter::kDefaultElementCap;
    std::string out_path;

    GenSet::Kind genset_kind() const { return genset == "symmetric" ? GenSet::Kind::Symmetric : GenSet::Kind::LampT; }
    std::size_t radius_or(std::size_t fallback) const { return radius.value_or(fallback); }
};

namespace detail {

inline nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

// Rows of (element, 𝔫, σ₀) ordered by 𝔫 then element.
inline std::vector<std::pair<Elem, BigInt>> by_horizontal_coordinate(std::vector<Elem> elems, const Lamplighter& group) {
    std::vector<std::pair<Elem, BigInt>> rows;
    for (auto& g : elems) {
        BigInt n = nnn(g, group);
        rows.emplace_back(std::move(g), std::move(n));
    }
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second < b.second : a.first < b.first;
    });
    return rows;
}

struct PropertyResult {
    explicit PropertyResult(std::string n) : name(std::move(n)) {}

    std::string name;
    std::size_t checked = 0;
    std::vector<std::string> counterexamples;
    std::size_t failures = 0;

    void fail(std::string what) {
        ++failures;
        if (counterexamples.size() < 5) counterexamples.push_back(std::move(what));
    }
    nlohmann::json to_json() const {
        return {{"name", name},
                {"passed", failures == 0},
                {"checked", checked},
                {"failures", failures},
                {"counterexamples", counterexamples}};
    }
};

}  // namespace detail

class App {
public:
    App(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

    int run(int argc, const char* const* argv) {
        CLI::App app{"Conformist subshift on lamplighter groups"};
        app.set_config("--config", "", "TOML/INI file with option defaults");
        app.require_subcommand(1);
        app.fallthrough();
        app.add_option("--lambda", cfg_.lambda, "Λ: cyclic:<m>, product:<a>x<b>, or a JSON table");
        app.add_option("--radius", cfg_.radius, "ball radius");
        app.add_option("--genset", cfg_.genset, "generating set")->check(CLI::IsMember({"lamp-t", "symmetric"}));
        app.add_option("--format", cfg_.format, "output format")->check(CLI::IsMember({"json", "csv", "dot", "text"}));
        app.add_option("--seed", cfg_.seed, "seed for randomized checks");
        app.add_option("--node-cap", cfg_.node_cap, "search node cap");
        app.add_option("--workers", cfg_.workers, "search worker threads")->check(CLI::PositiveNumber);
        app.add_option("--element-cap", cfg_.element_cap, "ball element cap");
        app.add_option("--out", cfg_.out_path, "write output to this file");

        auto* sigma0_cmd = app.add_subcommand("sigma0", "tabulate 𝔫 and σ₀");
        sigma0_cmd->add_option("--elem", elems_, "elements (default: the whole ball)");

        auto* verify_cmd = app.add_subcommand("verify", "run the property suite");
        verify_cmd->add_option("--samples", samples_, "random cases per property");
        verify_cmd->add_option("--sweep", sweep_, "substitution/parity sweep bound on n");
        verify_cmd->add_option("--depth", depth_, "negative-lamp audit depth");
        verify_cmd->add_flag("--mutate", mutate_, "flip σ₀ at the identity before checking");

        auto* search_cmd = app.add_subcommand("search", "completion or invariant search");
        search_cmd->add_option("--mode", mode_, "complete|invariant")->check(CLI::IsMember({"complete", "invariant"}));
        search_cmd->add_option("--subgroup", subgroup_, "subgroup descriptor, e.g. sumker:cyclic:3:1");
        search_cmd->add_option("--domain", domain_file_, "JSON list of elements (overrides --radius)");
        search_cmd->add_option("--fix", fix_file_, "PartialConfig JSON of fixed cells");
        search_cmd->add_option("--spec", spec_file_, "SftSpec JSON (default: conformist subshift)");
        search_cmd->add_option("--split-depth", split_depth_, "variables split into independent subproblems");
        search_cmd->add_flag("--hint", hint_, "try σ₀ values first");
        search_cmd->add_flag("--timing", timing_, "include wall time in the output");

        auto* decompose_cmd = app.add_subcommand("decompose", "split lamps along L and certify refutations");
        decompose_cmd->add_option("--subgroup", subgroup_, "subgroup descriptor")->required();
        decompose_cmd->add_option("--lamp", lamps_, "lamps to decompose");
        decompose_cmd->add_flag("--certify", certify_, "emit and validate the contradiction certificate");

        auto* render_cmd = app.add_subcommand("render", "DOT drawing of a ball");
        render_cmd->add_option("--config-file", render_config_, "PartialConfig JSON to draw instead of σ₀");

        auto* tables_cmd = app.add_subcommand("tables", "b_ℓ table, π_ℓ iterates, pattern lists");
        tables_cmd->add_option("which", which_, "bseq|subst|patterns")
            ->required()
            ->check(CLI::IsMember({"bseq", "subst", "patterns"}));
        tables_cmd->add_option("--ell", ell_, "ℓ (default: order of --lambda)");
        tables_cmd->add_option("--count", count_, "largest n in the b_ℓ table");
        tables_cmd->add_option("--iterations", iterations_, "number of π_ℓ iterates");

        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp& e) {
            out_ << app.help();
            return kOk;
        } catch (const CLI::ParseError& e) {
            err_ << "error: " << e.what() << "\n";
            return kUsage;
        }

        try {
            std::ostringstream buffer;
            int code = kOk;
            if (*sigma0_cmd) code = cmd_sigma0(buffer);
            if (*verify_cmd) code = cmd_verify(buffer);
            if (*search_cmd) code = cmd_search(buffer);
            if (*decompose_cmd) code = cmd_decompose(buffer);
            if (*render_cmd) code = cmd_render(buffer);
            if (*tables_cmd) code = cmd_tables(buffer);
            emit(buffer.str());
            return code;
        } catch (const ParseError& e) {
            err_ << "parse error: " << e.what() << "\n";
            return kUsage;
        } catch (const ResourceLimitError& e) {
            err_ << "resource limit: " << e.what() << "\n";
            return kResourceLimit;
        } catch (const InconsistentDescriptor& e) {
            err_ << "inconsistent subgroup descriptor: " << e.what() << "\n";
            return kPropertyFailure;
        } catch (const std::invalid_argument& e) {
            err_ << "error: " << e.what() << "\n";
            return kUsage;
        }
    }

private:
    void emit(const std::string& text) {
        if (cfg_.out_path.empty()) {
            out_ << text;
            return;
        }
        std::ofstream file(cfg_.out_path, std::ios::binary);
        if (!file) throw ParseError("cannot write " + cfg_.out_path);
        file << text;
    }

    Lamplighter group() const { return Lamplighter(parse_lambda(cfg_.lambda)); }

    std::vector<Elem> ball(const Lamplighter& g, std::size_t radius) const {
        return g.ball(radius, g.generators(cfg_.genset_kind()), cfg_.element_cap);
    }

    int cmd_sigma0(std::ostream& os) {
        const auto g = group();
        std::vector<Elem> elems;
        if (elems_.empty()) {
            elems = ball(g, cfg_.radius_or(1));
        } else {
            for (const auto& s : elems_) elems.push_back(parse_elem(s, g));
        }
        const auto rows = detail::by_horizontal_coordinate(std::move(elems), g);
        const std::string format = cfg_.format.empty() ? "csv" : cfg_.format;
        if (format == "json") {
            nlohmann::json j = nlohmann::json::array();
            for (const auto& [e, n] : rows)
                j.push_back({{"elem", to_string(e)}, {"n", n.str()}, {"sigma0", to_int(b_ell(n, g.ell()))}});
            os << j.dump(2) << "\n";
        } else if (format == "csv") {
            os << "element,n,sigma0\n";
            for (const auto& [e, n] : rows) os << to_string(e) << "," << n.str() << "," << to_int(b_ell(n, g.ell())) << "\n";
        } else if (format == "text") {
            for (const auto& [e, n] : rows) os << to_string(e) << "\t" << n.str() << "\t" << to_int(b_ell(n, g.ell())) << "\n";
        } else {
            throw std::invalid_argument("sigma0 supports csv, json or text");
        }
        return kOk;
    }

    int cmd_verify(std::ostream& os) {
        const auto g = group();
        const std::size_t ell = g.ell();
        require_ell(ell);
        const std::size_t radius = cfg_.radius_or(5);
        Rng rng(cfg_.seed);
        std::vector<detail::PropertyResult> results;

        {
            detail::PropertyResult r{"group_axioms"};
            for (std::size_t i = 0; i < samples_; ++i) {
                const Elem a = random_elem(rng, ell), b = random_elem(rng, ell), c = random_elem(rng, ell);
                ++r.checked;
                if (g.multiply(g.multiply(a, b), c) != g.multiply(a, g.multiply(b, c)))
                    r.fail("associativity at " + to_string(a) + " | " + to_string(b) + " | " + to_string(c));
                if (g.multiply(a, Elem{}) != a || g.multiply(Elem{}, a) != a) r.fail("identity at " + to_string(a));
                if (!g.multiply(a, g.inverse(a)).is_identity() || !g.multiply(g.inverse(a), a).is_identity())
                    r.fail("inverse at " + to_string(a));
            }
            results.push_back(std::move(r));
        }
        {
            detail::PropertyResult r{"normal_form_roundtrip"};
            for (std::size_t i = 0; i < samples_; ++i) {
                const Elem a = random_elem(rng, ell);
                ++r.checked;
                if (parse_elem(to_string(a), g) != a) r.fail(to_string(a));
            }
            results.push_back(std::move(r));
        }
        {
            detail::PropertyResult r{"conjugation_law"};
            for (std::int64_t m = -8; m <= 8; ++m)
                for (std::int64_t i = -8; i <= 8; ++i)
                    for (GroupIndex v = 0; v < ell; ++v) {
                        ++r.checked;
                        const Elem lhs = g.product({Elem::t_power(m), g.lamp_embed(v, i), Elem::t_power(-m)});
                        if (lhs != g.lamp_embed(v, i + m)) r.fail("m=" + std::to_string(m) + " i=" + std::to_string(i));
                    }
            results.push_back(std::move(r));
        }
        {
            detail::PropertyResult r{"role_models_absorb_negative_lamp"};
            for (std::size_t i = 0; i < samples_; ++i) {
                const Elem a = random_elem(rng, ell);
                auto base = g.role_models(a);
                std::sort(base.begin(), base.end());
                for (GroupIndex v = 0; v < ell; ++v) {
                    ++r.checked;
                    auto moved = g.role_models(g.multiply(a, g.lamp_embed(v, -1)));
                    std::sort(moved.begin(), moved.end());
                    if (moved != base) r.fail(to_string(a) + " with a" + std::to_string(v) + "@-1");
                }
            }
            results.push_back(std::move(r));
        }
        {
            detail::PropertyResult r{"role_model_images"};
            for (std::size_t i = 0; i < samples_; ++i) {
                const Elem a = random_elem(rng, ell);
                ++r.checked;
                auto images = rm_images(a, g);
                std::sort(images.begin(), images.end());
                const BigInt base = nnn(a, g) * ell;
                for (std::size_t j = 0; j < ell; ++j)
                    if (images[j] != base + j) {
                        r.fail(to_string(a));
                        break;
                    }
            }
            results.push_back(std::move(r));
        }
        {
            detail::PropertyResult r{"substitution_parity"};
            for (std::uint64_t n = 0; n < sweep_; ++n) {
                const BitWord image = pi_ell({b_ell(n, ell)}, ell);
                for (std::size_t j = 0; j < ell; ++j) {
                    ++r.checked;
                    if (b_ell(n * ell + j, ell) != image[j])
                        r.fail("n=" + std::to_string(n) + " j=" + std::to_string(j));
                }
            }
            results.push_back(std::move(r));
        }
        {
            detail::PropertyResult r{"t_invariance"};
            for (std::size_t i = 0; i < samples_; ++i) {
                const Elem a = random_elem(rng, ell);
                const Elem ta = g.multiply(Elem::t_power(1), a);
                ++r.checked;
                if (nnn(ta, g) != nnn(a, g) || sigma0(ta, g) != sigma0(a, g)) r.fail(to_string(a));
            }
            results.push_back(std::move(r));
        }

        const auto domain = ball(g, radius);
        PartialConfig sampled = sample_sigma0(domain, g);
        std::optional<Elem> mutated;
        if (mutate_) {
            mutated = Elem::identity();
            sampled.set(*mutated, flip(*sampled.get(*mutated)));
        }
        const SftSpec spec = conformist_spec(g.table());
        {
            detail::PropertyResult r{"sigma0_admissible"};
            const auto report = is_admissible(sampled, spec);
            r.checked = report.translates_checked;
            for (const auto& v : report.violations)
                r.fail("pattern " + std::to_string(v.pattern_index) + " at " + to_string(v.translate));
            std::set<Elem> engine_bad, direct_bad;
            for (const auto& v : report.violations) engine_bad.insert(v.translate);
            for (const auto& e : conformist_violations(sampled, g)) direct_bad.insert(e);
            if (engine_bad != direct_bad) r.fail("engine and direct majority check disagree");
            results.push_back(std::move(r));
        }
        {
            detail::PropertyResult r{"negative_lamp_audit"};
            const auto report = negative_lamp_audit(sampled, g, depth_);
            r.checked = report.pairs_checked;
            for (const auto& f : report.failures) r.fail(to_string(f.base) + " vs * " + to_string(f.offset));
            results.push_back(std::move(r));
        }
        if (g.table().is_abelian()) {
            detail::PropertyResult r{"invariance_refutation_certificate"};
            const auto sub = make_sum_kernel(g.table(), 1);
            const auto check = validate_certificate(certify_contradiction(sub, spec), sub, g);
            r.checked = 1;
            for (const auto& p : check.problems) r.fail(p);
            results.push_back(std::move(r));
        }

        bool passed = true;
        nlohmann::json props = nlohmann::json::array();
        for (const auto& r : results) {
            passed = passed && r.failures == 0;
            props.push_back(r.to_json());
        }
        nlohmann::json report = {{"lambda", lambda_to_json(g.table())},
                                 {"radius", radius},
                                 {"genset", cfg_.genset},
                                 {"seed", cfg_.seed},
                                 {"samples", samples_},
                                 {"ball_size", domain.size()},
                                 {"mutated", mutated ? nlohmann::json(to_string(*mutated)) : nlohmann::json(nullptr)},
                                 {"properties", props},
                                 {"passed", passed}};
        os << report.dump(2) << "\n";
        return passed ? kOk : kPropertyFailure;
    }

    int cmd_search(std::ostream& os) {
        std::optional<SftSpec> spec;
        std::optional<SubgroupDescriptor> sub;
        if (mode_ == "invariant") {
            if (subgroup_.empty()) throw ParseError("invariant mode requires --subgroup");
            // the descriptor names its own Λ; --lambda is ignored here
            auto [table, descriptor] = parse_descriptor(subgroup_);
            spec.emplace(conformist_spec(table));
            sub = std::move(descriptor);
        }
        if (!spec_file_.empty()) {
            spec.emplace(spec_from_json(detail::read_json_file(spec_file_)));
        } else if (!spec) {
            spec.emplace(conformist_spec(parse_lambda(cfg_.lambda)));
        }
        const Lamplighter& g = spec->group();

        std::vector<Elem> domain;
        if (!domain_file_.empty()) {
            domain = elems_from_json(detail::read_json_file(domain_file_), g);
        } else {
            domain = ball(g, cfg_.radius_or(3));
        }
        PartialConfig fixed;
        if (!fix_file_.empty()) fixed = config_from_json(detail::read_json_file(fix_file_), g);

        SearchLimits limits;
        limits.node_cap = cfg_.node_cap;
        limits.workers = cfg_.workers;
        limits.split_depth = split_depth_;
        limits.sigma0_hint = hint_;
        std::mutex progress_mutex;
        limits.progress = [&](std::uint64_t nodes) {
            std::lock_guard lock(progress_mutex);
            err_ << "progress: " << nodes << " nodes\n";
        };

        SearchOutcome outcome;
        nlohmann::json j;
        if (sub) {
            const auto gens = window_generators(*sub, g, domain);
            outcome = invariant_search(*spec, gens, domain, limits);
            j["subgroup"] = subgroup_;
            j["subgroup_generators"] = gens.size();
        } else {
            outcome = complete_search(fixed, domain, *spec, limits);
        }
        j["mode"] = mode_;
        j["seed"] = cfg_.seed;
        j["domain_size"] = domain.size();
        j.update(outcome_to_json(outcome, timing_));
        os << j.dump(2) << "\n";
        return outcome.status == SearchStatus::ResourceLimit ? kResourceLimit : kOk;
    }

    int cmd_decompose(std::ostream& os) {
        auto [table, sub] = parse_descriptor(subgroup_);
        const Lamplighter g(table);
        nlohmann::json j = {{"subgroup", subgroup_}, {"seed", cfg_.seed}};
        nlohmann::json parts = nlohmann::json::array();
        for (const auto& s : lamps_) {
            const auto d = decompose(parse_lamp(s, g), sub, table);
            parts.push_back({{"lamp", to_string(parse_lamp(s, g))},
                             {"k", d.k},
                             {"mu_L", to_string(d.in_subgroup)},
                             {"mu_minus", to_string(d.negative)}});
        }
        j["decompositions"] = parts;
        int code = kOk;
        if (certify_) {
            const auto cert = certify_contradiction(sub, conformist_spec(table));
            const auto check = validate_certificate(cert, sub, g);
            j["certificate"] = to_json(cert);
            j["validator"] = {{"valid", check.valid}, {"problems", check.problems}};
            if (!check.valid) code = kPropertyFailure;
        }
        os << j.dump(2) << "\n";
        return code;
    }

    int cmd_render(std::ostream& os) {
        const auto g = group();
        const std::size_t radius = cfg_.radius_or(1);
        const auto gens = g.generators(cfg_.genset_kind());
        const auto elems = g.ball(radius, gens, cfg_.element_cap);
        PartialConfig labels;
        const bool supplied = !render_config_.empty();
        if (supplied) {
            labels = config_from_json(detail::read_json_file(render_config_), g);
        } else {
            labels = sample_sigma0(elems, g);
        }
        const ElemSet members(elems.begin(), elems.end());

        // layers by shift; each layer ordered by 𝔫 then element
        std::map<std::int64_t, std::vector<Elem>> layers;
        for (const auto& e : elems) layers[e.shift].push_back(e);

        os << "digraph conformist {\n";
        os << "  // lambda=" << cfg_.lambda << " radius=" << radius << " genset=" << cfg_.genset
           << " labels=" << (supplied ? "config" : "sigma0") << " seed=" << cfg_.seed << "\n";
        os << "  // filled = 0, unfilled = 1, dashed = unassigned\n";
        os << "  rankdir=BT;\n";
        os << "  node [shape=circle, fontsize=9];\n";
        for (auto& [shift, layer] : layers) {
            const auto rows = detail::by_horizontal_coordinate(layer, g);
            os << "  { rank=same; // shift " << shift << "\n";
            for (const auto& [e, n] : rows) {
                const auto bit = labels.get(e);
                os << "    \"" << to_string(e) << "\"";
                if (!bit) {
                    os << " [style=dashed];\n";
                } else if (*bit == Bit::Zero) {
                    os << " [style=filled, fillcolor=black, fontcolor=white];\n";
                } else {
                    os << " [style=solid];\n";
                }
            }
            os << "  }\n";
        }
        for (const auto& e : elems)
            for (const auto& s : gens.base()) {
                const Elem h = g.multiply(e, s);
                if (members.count(h)) os << "  \"" << to_string(e) << "\" -> \"" << to_string(h) << "\";\n";
            }
        os << "}\n";
        return kOk;
    }

    int cmd_tables(std::ostream& os) {
        const std::size_t ell = ell_ ? *ell_ : parse_lambda(cfg_.lambda).order();
        require_ell(ell);
        const std::string format = cfg_.format.empty() ? (which_ == "bseq" ? "csv" : "text") : cfg_.format;
        if (which_ == "bseq") {
            auto digits = [&](std::uint64_t n) {
                std::string s;
                for (auto d : base_digits(n, ell)) {
                    if (ell > 10 && !s.empty()) s += ".";
                    s += std::to_string(d);
                }
                return s;
            };
            if (format == "json") {
                nlohmann::json j = nlohmann::json::array();
                for (std::uint64_t n = 0; n <= count_; ++n)
                    j.push_back({{"n", n}, {"digits", digits(n)}, {"b", to_int(b_ell(n, ell))}});
                os << j.dump(2) << "\n";
            } else {
                os << "n,base" << ell << ",b\n";
                for (std::uint64_t n = 0; n <= count_; ++n)
                    os << n << "," << digits(n) << "," << to_int(b_ell(n, ell)) << "\n";
            }
        } else if (which_ == "subst") {
            BitWord w{Bit::Zero};
            for (std::size_t i = 0; i < iterations_; ++i) {
                w = pi_ell(w, ell);
                os << to_string(w) << "\n";
            }
        } else {
            const auto forbidden = forbidden_patterns(ell);
            const auto allowed = allowed_patterns(ell);
            auto row = [](const Pattern& p) {
                // center first, then the role-model row in enumeration order
                std::string s;
                const auto& cells = p.cells();
                s += to_char(cells.back().bit);
                s += " | ";
                for (std::size_t i = 0; i + 1 < cells.size(); ++i) s += to_char(cells[i].bit);
                return s;
            };
            if (format == "json") {
                nlohmann::json jf = nlohmann::json::array(), ja = nlohmann::json::array();
                for (const auto& p : forbidden) jf.push_back(pattern_to_json(p));
                for (const auto& p : allowed) ja.push_back(pattern_to_json(p));
                os << nlohmann::json{{"ell", ell},
                                     {"forbidden_count", forbidden.size()},
                                     {"allowed_count", allowed.size()},
                                     {"forbidden", jf},
                                     {"allowed", ja}}
                          .dump(2)
                   << "\n";
            } else {
                os << "# center | role models t^-1[a0]_0 .. t^-1[a" << ell - 1 << "]_0\n";
                os << "forbidden " << forbidden.size() << "\n";
                for (const auto& p : forbidden) os << row(p) << "\n";
                os << "allowed " << allowed.size() << "\n";
                for (const auto& p : allowed) os << row(p) << "\n";
            }
        }
        return kOk;
    }

    std::ostream& out_;
    std::ostream& err_;
    RunConfig cfg_;

    std::vector<std::string> elems_;
    std::size_t samples_ = 1000;
    std::uint64_t sweep_ = 10000;
    std::size_t depth_ = 2;
    bool mutate_ = false;

    std::string mode_ = "complete";
    std::string subgroup_;
    std::string domain_file_;
    std::string fix_file_;
    std::string spec_file_;
    unsigned split_depth_ = 3;
    bool hint_ = false;
    bool timing_ = false;

    std::vector<std::string> lamps_;
    bool certify_ = false;

    std::string render_config_;

    std::string which_;
    std::optional<std::size_t> ell_;
    std::uint64_t count_ = 16;
    std::size_t iterations_ = 3;
};

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    App app(out, err);
    return app.run(argc, argv);
}

}  // namespace conformist::cli
