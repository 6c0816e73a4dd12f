#include <gtest/gtest.h>

#include "omega/oracle.hpp"
#include "support.hpp"

using namespace omega;
using namespace omega::test;

TEST(Oracle, TncBadPair) {
    const Nft t = load("t_nc.nft").nft();
    auto r = brute_force_check(t, Variant::Cont, 2);
    ASSERT_TRUE(r.pair.has_value());
    const auto& p = *r.pair;
    EXPECT_EQ(p.u, Word());
    EXPECT_EQ(p.v, W("a"));
    EXPECT_EQ(p.w, Word());
    EXPECT_EQ(p.z, U("(b)"));
    EXPECT_EQ(p.z2, U("(a)"));
    EXPECT_EQ(p.evidence, Evidence::MismatchAt);
    EXPECT_EQ(p.position, 0u);
    EXPECT_TRUE(validate_bad_pair(evaluator_of(t), p, 8));
}

TEST(Oracle, TcNoneUpTo3) {
    const Nft t = load("t_c.nft").nft();
    EXPECT_FALSE(brute_force_check(t, Variant::Cont, 3).pair.has_value());
    EXPECT_FALSE(brute_force_check(t, Variant::UCont, 2).pair.has_value());
}

TEST(Oracle, JFound) {
    const TwoWay t = load("j.2dft").twoway();
    auto r = brute_force_check(t, Variant::Cont, 3);
    ASSERT_TRUE(r.pair.has_value());
    EXPECT_TRUE(validate_bad_pair(evaluator_of(t), *r.pair, 8));
}

TEST(Oracle, DblNoneUpTo2) {
    EXPECT_FALSE(brute_force_check(load("dbl.2dbt").twoway(), Variant::Cont, 2).pair.has_value());
}

TEST(Oracle, Profiles) {
    EXPECT_EQ(parse_profile("tiny").states, 2u);
    EXPECT_EQ(parse_profile("3,2,3,1").output, 3u);
    EXPECT_THROW(parse_profile("3,2"), InputError);
    EXPECT_THROW(parse_profile("huge"), InputError);
}

TEST(Oracle, GeneratorReproducible) {
    for (std::uint64_t seed : {0u, 7u, 99u}) {
        EXPECT_EQ(serialize(random_instance(seed)), serialize(random_instance(seed)));
    }
    EXPECT_NE(serialize(random_instance(1)), serialize(random_instance(2)));
}

TEST(OracleProperty, GeneratedMachinesAreFunctionalAndSmall) {
    int cont = 0, nc = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const Nft t = random_instance(seed);
        ASSERT_LE(t.size(), 4u);
        ASSERT_EQ(t.input.size(), 2u);
        ASSERT_LE(t.max_output(), 2u);
        ASSERT_FALSE(functionality_check(t, 8).has_value()) << seed;
        (check_continuity(t, Variant::Cont).continuous ? cont : nc)++;
    }
    EXPECT_GE(cont, 5);
    EXPECT_GE(nc, 5);
}

// Every reported pair re-validates at n = 1..8, and a ucont pair with its
// limit in the domain is also a cont bad pair.
TEST(OracleProperty, PairsRevalidate) {
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const Nft t = random_instance(seed);
        const Evaluator f = evaluator_of(t);
        for (Variant v : {Variant::Cont, Variant::UCont}) {
            auto r = brute_force_check(t, v, 2);
            if (!r.pair) continue;
            ++checked;
            ASSERT_TRUE(validate_bad_pair(f, *r.pair, 8)) << seed;
        }
        auto u = brute_force_check(t, Variant::UCont, 2);
        if (u.pair && f(up_normalize(u.pair->u, u.pair->v)))
            ASSERT_TRUE(brute_force_check(t, Variant::Cont, 2).pair.has_value()) << seed;
    }
    EXPECT_GT(checked, 5);
}

// The central differential law at the unit-test scale; the acceptance binary
// runs the full 200-instance corpus.
TEST(OracleProperty, AgreesWithExactCheck) {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const Nft t = random_instance(seed, {3, 2, 2, 2});
        for (Variant v : {Variant::Cont, Variant::UCont}) {
            const bool c = check_continuity(t, v).continuous;
            auto b = brute_force_check(t, v, 2);
            if (c) ASSERT_FALSE(b.pair.has_value()) << seed;
        }
    }
}
