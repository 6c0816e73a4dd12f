#include <gtest/gtest.h>

#include <algorithm>

#include "omega/oracle.hpp"
#include "support.hpp"

using namespace omega;
using namespace omega::test;

namespace {

const Nft& tc() {
    static const Nft t = load("t_c.nft").nft();
    return t;
}
const Nft& tnc() {
    static const Nft t = load("t_nc.nft").nft();
    return t;
}

// Exists y = s(p) with |s|,|p| <= bound, uy in dom and f(uy) mismatching w.
bool extension_mismatch(const Nft& t, const Word& u, const Word& w, std::size_t bound) {
    for (const auto& y : sample_up_words(t.input, bound, bound)) {
        auto fx = eval_up(t, up_concat(u, y));
        if (fx && mismatch(w, *fx)) return true;
    }
    return false;
}

} // namespace

TEST(OneWay, EvalExamples) {
    EXPECT_EQ(eval_up(tc(), U("aa(c)")), U("aaaa(c)"));
    EXPECT_EQ(eval_up(tc(), U("(a)")), U("(a)"));
    EXPECT_EQ(eval_up(tc(), U("a(d)")), U("a(d)"));
    EXPECT_EQ(eval_up(tnc(), U("a(b)")), U("(d)"));
    EXPECT_EQ(eval_up(tnc(), U("(a)")), U("(c)"));
    EXPECT_FALSE(eval_up(tnc(), U("(ab)")).has_value());
}

TEST(OneWay, EpsilonLoopOutputThrows) {
    Nft t;
    t.input = Alphabet({U'a'});
    t.output = Alphabet({U'a'});
    int q = t.add_state("q", true);
    t.set_initial(q);
    t.add_edge(q, U'a', q, Word());
    EXPECT_THROW(eval_up(t, U("(a)")), EpsilonLoopOutput);
}

TEST(OneWay, ContinuityVerdicts) {
    auto nc = check_continuity(tnc(), Variant::Cont);
    ASSERT_FALSE(nc.continuous);
    ASSERT_TRUE(nc.witness.has_value());
    EXPECT_EQ(nc.witness->u, W("a"));
    EXPECT_EQ(nc.witness->v, W("a"));
    EXPECT_EQ(validate_witness(tnc(), *nc.witness, 5), nc.witness->position);
    EXPECT_TRUE(check_continuity(tc(), Variant::Cont).continuous);
    EXPECT_TRUE(check_continuity(tc(), Variant::UCont).continuous);
    EXPECT_FALSE(check_continuity(load("t_inf.nft").nft(), Variant::Cont).continuous);
}

TEST(OneWay, UniversalPrefixConsistent) {
    const Nft t = trim(tc());
    EXPECT_TRUE(universal_prefix_consistent(t, W("aa"), W("aa")));
    EXPECT_FALSE(universal_prefix_consistent(t, W("aa"), W("aaa")));
    EXPECT_FALSE(universal_prefix_consistent(trim(tnc()), W("a"), W("c")));
    EXPECT_TRUE(universal_prefix_consistent(trim(tnc()), W("aab"), W("ddd")));
    EXPECT_TRUE(universal_prefix_consistent(trim(tnc()), W("ab"), W("dd")));
}

TEST(OneWay, FunctionalityCheck) {
    EXPECT_FALSE(functionality_check(tc(), 8).has_value());
    EXPECT_FALSE(functionality_check(tnc(), 8).has_value());
    Nft t;
    t.input = Alphabet({U'a'});
    t.output = Alphabet(kAB);
    int p = t.add_state("p", true), q = t.add_state("q", true);
    t.set_initial(p);
    t.set_initial(q);
    t.add_edge(p, U'a', p, W("a"));
    t.add_edge(q, U'a', q, W("b"));
    auto c = functionality_check(t, 8);
    ASSERT_TRUE(c.has_value());
    EXPECT_EQ(c->x, U("(a)"));
    EXPECT_NE(c->out1, c->out2);
}

TEST(OneWay, LongestRunOutput) {
    const Nft t = trim(tc());
    EXPECT_EQ(longest_run_output(t, W("aa")), 4u);
    EXPECT_FALSE(longest_run_output(t, W("ca")).has_value());
}

// Oracle: eval_up over bounded extensions; a found mismatch always refutes,
// and on this corpus the bound is enough to find every refutation.
TEST(OneWayProperty, PrefixConsistencyAgainstExtensions) {
    int refuted = 0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const Nft t = random_instance(seed, {3, 2, 2, 2});
        const Nft tt = trim(t);
        for (const auto& u : enumerate_words(t.input, 0, 3))
            for (const auto& w : enumerate_words(t.output, 1, 3)) {
                const bool oracle = extension_mismatch(t, u, w, 3);
                ASSERT_EQ(!universal_prefix_consistent(tt, u, w), oracle)
                    << "seed " << seed << " u=" << format_word(u) << " w=" << format_word(w);
                refuted += oracle;
            }
    }
    EXPECT_GT(refuted, 0);
}

TEST(OneWayProperty, EvalIndependentOfTransitionOrder) {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const Nft t = random_instance(seed);
        Nft r = t;
        for (auto& s : r.succ) std::reverse(s.begin(), s.end());
        std::reverse(r.initial.begin(), r.initial.end());
        for (const auto& x : sample_up_words(t.input, 2, 2)) {
            std::optional<UPWord> a, b;
            try {
                a = eval_up(t, x);
                b = eval_up(r, x);
            } catch (const EpsilonLoopOutput&) {
                continue;
            }
            ASSERT_EQ(a, b) << seed << " " << format_up(x);
        }
    }
}

TEST(OneWayProperty, UniformImpliesContinuous) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const Nft t = random_instance(seed);
        auto c = check_continuity(t, Variant::Cont);
        auto u = check_continuity(t, Variant::UCont);
        if (u.continuous) ASSERT_TRUE(c.continuous) << seed;
        if (!c.continuous) ASSERT_TRUE(validate_witness(t, *c.witness, 5).has_value()) << seed;
        if (!u.continuous) ASSERT_TRUE(validate_witness(t, *u.witness, 5).has_value()) << seed;
    }
}
