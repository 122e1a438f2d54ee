#include <gtest/gtest.h>

#include "conformist/conformist.hpp"
#include "oracle.hpp"

using namespace conformist;

namespace {

const Lamplighter& z3() {
    static const Lamplighter g(FiniteGroupTable::cyclic(3));
    return g;
}

PartialConfig row_at(const Elem& g, Bit center, std::array<Bit, 3> row) {
    PartialConfig cfg;
    cfg.set(g, center);
    const auto rm = z3().role_models(g);
    for (std::size_t i = 0; i < 3; ++i) cfg.set(rm[i], row[i]);
    return cfg;
}

}  // namespace

TEST(SftSpec, DedupesAndValidates) {
    const auto pats = forbidden_patterns(3);
    std::vector<Pattern> doubled = pats;
    doubled.insert(doubled.end(), pats.begin(), pats.end());
    EXPECT_EQ(SftSpec(FiniteGroupTable::cyclic(3), doubled).patterns().size(), pats.size());
    // a pattern mentioning a lamp value outside Λ
    std::vector<Pattern> bad{Pattern({{Elem{Lamp::single(5, 0), 0}, Bit::One}})};
    EXPECT_THROW(SftSpec(FiniteGroupTable::cyclic(3), bad), std::invalid_argument);
}

TEST(Pattern, RejectsDuplicatesAndEmpty) {
    EXPECT_THROW(Pattern({}), std::invalid_argument);
    EXPECT_THROW(Pattern({{Elem{}, Bit::One}, {Elem{}, Bit::Zero}}), std::invalid_argument);
}

TEST(ViolatesAt, ThreeOutcomes) {
    const auto spec = conformist_spec(FiniteGroupTable::cyclic(3));
    // center 1, row (1,1,1): unanimous, so forbidden
    const auto cfg = row_at(Elem{}, Bit::One, {Bit::One, Bit::One, Bit::One});
    std::size_t violated = 0;
    for (const auto& p : spec.patterns())
        violated += violates_at(cfg, p, Elem{}, z3()) == PatternStatus::Violated;
    EXPECT_EQ(violated, 1U);

    PartialConfig partial = cfg;
    partial.erase(z3().role_models(Elem{})[0]);
    for (const auto& p : spec.patterns()) EXPECT_NE(violates_at(partial, p, Elem{}, z3()), PatternStatus::Violated);
}

TEST(IsAdmissible, SingleRows) {
    const auto spec = conformist_spec(FiniteGroupTable::cyclic(3));
    const Elem g = parse_elem("a2@0 * t^2", z3());
    EXPECT_TRUE(is_admissible(row_at(g, Bit::One, {Bit::One, Bit::Zero, Bit::One}), spec).admissible);
    EXPECT_TRUE(is_admissible(row_at(g, Bit::Zero, {Bit::One, Bit::Zero, Bit::Zero}), spec).admissible);
    const auto bad = is_admissible(row_at(g, Bit::Zero, {Bit::One, Bit::Zero, Bit::One}), spec);
    ASSERT_EQ(bad.violations.size(), 1U);
    EXPECT_EQ(bad.violations[0].translate, g);
    EXPECT_EQ(bad.translates_checked, spec.patterns().size());
    EXPECT_FALSE(is_admissible(row_at(g, Bit::Zero, {Bit::Zero, Bit::Zero, Bit::Zero}), spec).admissible);
}

TEST(IsAdmissible, EmptyAndBoundary) {
    const auto spec = conformist_spec(FiniteGroupTable::cyclic(3));
    EXPECT_TRUE(is_admissible(PartialConfig{}, spec).admissible);
    // a lone cell: no translate fits, nothing is checked
    PartialConfig one;
    one.set(Elem{}, Bit::One);
    const auto r = is_admissible(one, spec);
    EXPECT_TRUE(r.admissible);
    EXPECT_EQ(r.translates_checked, 0U);
}

TEST(IsAdmissible, AllZerosFails) {
    const auto spec = conformist_spec(FiniteGroupTable::cyclic(3));
    const auto ball = z3().ball(2, z3().generators(GenSet::Kind::LampT));
    PartialConfig zeros;
    for (const auto& g : ball) zeros.set(g, Bit::Zero);
    EXPECT_FALSE(is_admissible(zeros, spec).admissible);
}

TEST(IsAdmissible, Sigma0OnBalls) {
    for (const char* lambda : {"cyclic:3", "cyclic:4", "cyclic:5", "product:cyclic:2xcyclic:2"}) {
        const Lamplighter g(parse_lambda(lambda));
        const auto spec = conformist_spec(g.table());
        for (auto kind : {GenSet::Kind::LampT, GenSet::Kind::Symmetric}) {
            const auto ball = g.ball(3, g.generators(kind));
            const auto report = is_admissible(sample_sigma0(ball, g), spec);
            EXPECT_TRUE(report.admissible) << lambda;
            EXPECT_GT(report.translates_checked, 0U);
        }
    }
}

TEST(IsAdmissible, AgreesWithOracleOnRandomConfigs) {
    const auto spec = conformist_spec(FiniteGroupTable::cyclic(3));
    const oracle::AffineModel model(3);
    const auto ball = z3().ball(2, z3().generators(GenSet::Kind::LampT));
    Rng rng(21);
    std::bernoulli_distribution coin(0.5);
    int admissible = 0;
    for (int trial = 0; trial < 300; ++trial) {
        // start from σ₀ and flip a few cells so both verdicts occur
        auto cfg = sample_sigma0(ball, z3());
        std::uniform_int_distribution<std::size_t> pick(0, ball.size() - 1);
        const int flips = trial % 3;
        for (int f = 0; f < flips; ++f) {
            const auto& g = ball[pick(rng)];
            cfg.set(g, flip(*cfg.get(g)));
        }
        std::map<Elem, int> plain;
        for (const auto& [g, b] : cfg) plain[g] = to_int(b);
        const bool expected = oracle::conformist_admissible(plain, model);
        ASSERT_EQ(is_admissible(cfg, spec).admissible, expected);
        admissible += expected;
    }
    EXPECT_GT(admissible, 100);
    EXPECT_LT(admissible, 300);
}

TEST(Mutation, FlippingIdentityIsCaught) {
    const auto spec = conformist_spec(FiniteGroupTable::cyclic(3));
    const auto ball = z3().ball(3, z3().generators(GenSet::Kind::LampT));
    auto cfg = sample_sigma0(ball, z3());
    cfg.set(Elem{}, flip(*cfg.get(Elem{})));
    const auto report = is_admissible(cfg, spec);
    EXPECT_FALSE(report.admissible);
    // the identity itself has all of RM(e) in the ball
    EXPECT_TRUE(std::any_of(report.violations.begin(), report.violations.end(),
                            [](const Violation& v) { return v.translate.is_identity(); }));
    EXPECT_FALSE(negative_lamp_audit(cfg, z3(), 1).passed());
}

TEST(NegativeLamps, Enumeration) {
    EXPECT_EQ(negative_lamps(3, 1).size(), 2U);
    EXPECT_EQ(negative_lamps(3, 2).size(), 8U);
    for (const auto& mu : negative_lamps(4, 2)) {
        EXPECT_FALSE(mu.empty());
        EXPECT_LT(*mu.max_position(), 0);
        EXPECT_GE(*mu.min_position(), -2);
    }
}

TEST(Audit, Sigma0PassesAndCounts) {
    const auto ball = z3().ball(4, z3().generators(GenSet::Kind::LampT));
    const auto cfg = sample_sigma0(ball, z3());
    const auto report = negative_lamp_audit(cfg, z3(), 2);
    EXPECT_TRUE(report.passed());
    EXPECT_GT(report.pairs_checked, 0U);
    EXPECT_THROW(negative_lamp_audit(cfg, z3(), 0), std::invalid_argument);
}
