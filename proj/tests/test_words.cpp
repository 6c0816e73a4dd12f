#include <gtest/gtest.h>

#include <numeric>

#include "support.hpp"

using namespace omega;
using namespace omega::test;

TEST(Words, LcpExamples) {
    EXPECT_EQ(lcp(U("(a)"), U("(a)")), kInfinity);
    EXPECT_EQ(lcp(U("(a)"), U("a(b)")), 1u);
    EXPECT_EQ(lcp(U("ab(ba)"), U("abb(ab)")), kInfinity);
    EXPECT_EQ(lcp(W("ab"), U("(a)")), 1u);
    EXPECT_EQ(lcp(W("aa"), W("aab")), 2u);
}

TEST(Words, MismatchExamples) {
    EXPECT_EQ(mismatch(W("aa"), W("ab")), 1u);
    EXPECT_FALSE(mismatch(W("aa"), U("aab(b)")).has_value());
    EXPECT_EQ(mismatch(U("(ab)"), U("(ba)")), 0u);
    EXPECT_FALSE(mismatch(U("a(b)"), U("ab(b)")).has_value());
}

TEST(Words, Normalize) {
    EXPECT_EQ(format_up(up_normalize(W("_"), W("aa"))), "(a)");
    EXPECT_EQ(format_up(up_normalize(W("a"), W("a"))), "(a)");
    EXPECT_EQ(format_up(up_normalize(W("ab"), W("baba"))), "ab(ba)");
    EXPECT_EQ(format_up(up_normalize(W("abb"), W("ab"))), "ab(ba)");
    EXPECT_EQ(format_up(up_normalize(W("a"), W("ba"))), "(ab)");
    EXPECT_EQ(format_up(U("ab#c#(d#d#)")), "ab#c(#d)");
}

TEST(Words, UpIndex) {
    EXPECT_EQ(up_index(U("ab(c)"), 0), U'a');
    EXPECT_EQ(up_index(U("ab(c)"), 99), U'c');
    EXPECT_EQ(up_index(U("(ab)"), 3), U'b');
}

TEST(Words, ParseAndFormat) {
    EXPECT_EQ(parse_word("_"), Word());
    EXPECT_EQ(format_word(Word()), "_");
    EXPECT_THROW(parse_up("ab"), InputError);
    EXPECT_THROW(parse_up("a()"), InputError);
    EXPECT_EQ(format_up(U("(b)")), "(b)");
}

TEST(Words, UpConcatAndSuffix) {
    EXPECT_EQ(up_concat(W("ab"), U("(a)")), U("ab(a)"));
    EXPECT_EQ(up_suffix(U("ab(cd)"), 3), U("(dc)"));
    EXPECT_EQ(up_suffix(U("ab(cd)"), 0), U("ab(cd)"));
}

// Normalization keeps the word, is idempotent, and yields a primitive period
// with a shortest prefix.
TEST(WordsProperty, NormalizeInvariants) {
    Gen g(11);
    for (int iter = 0; iter < 2000; ++iter) {
        Word u = g.word(kAB, 0, 6), v = g.word(kAB, 1, 6);
        UPWord x = up_normalize(u, v);
        UPWord raw{u, v};
        for (std::size_t i = 0; i <= 64; ++i) ASSERT_EQ(x.at(i), raw.at(i));
        UPWord again = up_normalize(x.prefix, x.period);
        ASSERT_EQ(again.prefix, x.prefix);
        ASSERT_EQ(again.period, x.period);
        for (std::size_t d = 1; d < x.period.size(); ++d)
            if (x.period.size() % d == 0) ASSERT_NE(power(x.period.substr(0, d), x.period.size() / d), x.period);
        if (!x.prefix.empty()) ASSERT_NE(x.prefix.back(), x.period.back());
    }
}

TEST(WordsProperty, EqualityMatchesLongWindow) {
    Gen g(12);
    int equal = 0;
    for (int iter = 0; iter < 10000; ++iter) {
        UPWord x{g.word(kAB, 0, 4), g.word(kAB, 1, 4)};
        UPWord y{g.word(kAB, 0, 4), g.word(kAB, 1, 4)};
        const std::size_t n = std::max(x.prefix.size(), y.prefix.size()) + x.period.size() + y.period.size() +
                              std::lcm(x.period.size(), y.period.size());
        const bool window = same_up_by_window(x, y, 10 * n);
        ASSERT_EQ(x == y, window);
        ASSERT_EQ(lcp(x, y) == kInfinity, window);
        equal += window;
    }
    EXPECT_GT(equal, 100);
}

TEST(WordsProperty, LcpAndMismatchDuality) {
    Gen g(13);
    for (int iter = 0; iter < 3000; ++iter) {
        UPWord x = g.up(kAB, 4, 3), y = g.up(kAB, 4, 3);
        ASSERT_EQ(lcp(x, y), lcp(y, x));
        auto m = mismatch(x, y);
        ASSERT_EQ(m.has_value(), lcp(x, y) != kInfinity);
        if (m) ASSERT_EQ(*m, lcp(x, y));
        Word w = g.word(kAB, 0, 6);
        auto mw = mismatch(w, x);
        ASSERT_EQ(mw.has_value(), lcp(w, x) < w.size());
        ASSERT_EQ(is_prefix(w, x), !mw.has_value());
    }
}

TEST(Words, EnumerateOrder) {
    auto ws = enumerate_words(Alphabet(kAB), 0, 2);
    ASSERT_EQ(ws.size(), 7u);
    EXPECT_EQ(ws[0], Word());
    EXPECT_EQ(ws[1], W("a"));
    EXPECT_EQ(ws[3], W("aa"));
    EXPECT_EQ(ws[6], W("bb"));
}
