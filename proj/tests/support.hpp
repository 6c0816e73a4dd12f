#pragma once

#include <random>
#include <set>
#include <string>
#include <vector>

#include "omega/buchi.hpp"
#include "omega/format.hpp"
#include "omega/oneway.hpp"
#include "omega/twoway.hpp"
#include "omega/words.hpp"

namespace omega::test {

inline MachineFile load(const std::string& name) { return load_machine(std::string(FIXTURE_DIR) + "/" + name); }
inline Word W(const char* s) { return parse_word(s); }
inline UPWord U(const char* s) { return parse_up(s); }

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}
    std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
    std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
    bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }
    Symbol pick(const std::vector<Symbol>& s) { return s[below(s.size())]; }
    Word word(const std::vector<Symbol>& letters, std::size_t lo, std::size_t hi) {
        Word w;
        for (std::size_t n = between(lo, hi); n > 0; --n) w.push_back(pick(letters));
        return w;
    }
    UPWord up(const std::vector<Symbol>& letters, std::size_t max_prefix, std::size_t max_period) {
        return up_normalize(word(letters, 0, max_prefix), word(letters, 1, max_period));
    }

private:
    std::mt19937_64 rng_;
};

inline const std::vector<Symbol> kAB{U'a', U'b'};

inline Buchi random_buchi(Gen& g, std::size_t max_states, const std::vector<Symbol>& letters) {
    Buchi b;
    b.alphabet = Alphabet(letters);
    const std::size_t n = g.between(1, max_states);
    for (std::size_t q = 0; q < n; ++q) b.add_state("s" + std::to_string(q), g.coin(0.4));
    b.set_initial(0);
    if (n > 1 && g.coin(0.3)) b.set_initial(int(g.between(1, n - 1)));
    for (std::size_t q = 0; q < n; ++q)
        for (Symbol a : letters)
            for (int k = 0; k < 2; ++k)
                if (g.coin(0.45)) b.add_edge(int(q), a, int(g.below(n)));
    return b;
}

// Small 2DBT over {a,b,#}; the endmarker always moves right.
inline TwoWay random_2dbt(Gen& g, std::size_t max_states) {
    TwoWay t;
    std::vector<Symbol> in{U'#', U'a', U'b'}, out{U'x', U'y'};
    t.input = Alphabet(in);
    t.output = Alphabet(out);
    const std::size_t n = g.between(2, max_states);
    for (std::size_t q = 0; q < n; ++q) t.add_state("q" + std::to_string(q), g.coin(0.5));
    t.initial = 0;
    std::vector<Symbol> tape{kEndmarker};
    tape.insert(tape.end(), in.begin(), in.end());
    for (std::size_t q = 0; q < n; ++q)
        for (Symbol a : tape) {
            if (!g.coin(0.9)) continue;
            const int dir = (a == kEndmarker || g.coin(0.65)) ? 1 : -1;
            t.add_rule(int(q), a, -1, int(g.below(n)), g.word(out, 0, 2), dir);
        }
    t.finalize();
    return t;
}

// Block-rereading shape: a first pass over a block, back to the previous # on
// reaching #, then a second pass. Factors inside a block are crossed three times.
inline TwoWay random_sweeper(Gen& g) {
    TwoWay t;
    std::vector<Symbol> out{U'x', U'y'};
    t.input = Alphabet(std::vector<Symbol>{U'#', U'a', U'b'});
    t.output = Alphabet(out);
    const int f0 = t.add_state("f0", g.coin(0.5)), f1 = t.add_state("f1", g.coin(0.5));
    const int bk = t.add_state("bk", g.coin(0.5));
    const int s0 = t.add_state("s0", g.coin(0.5)), s1 = t.add_state("s1", g.coin(0.5));
    const int first[] = {f0, f1}, second[] = {s0, s1};
    t.initial = f0;
    t.add_rule(f0, kEndmarker, -1, f0, g.word(out, 0, 1), 1);
    t.add_rule(bk, kEndmarker, -1, s0, Word(), 1);
    for (Symbol a : {U'a', U'b'}) {
        for (int q : first) t.add_rule(q, a, -1, first[g.below(2)], g.word(out, 0, 1), 1);
        for (int q : second) t.add_rule(q, a, -1, second[g.below(2)], g.word(out, 0, 1), 1);
        t.add_rule(bk, a, -1, bk, g.word(out, 0, 1), -1);
    }
    for (int q : first) t.add_rule(q, U'#', -1, bk, Word(), -1);
    t.add_rule(bk, U'#', -1, s0, Word(), 1);
    for (int q : second) t.add_rule(q, U'#', -1, f0, g.word(out, 0, 1), 1);
    t.finalize();
    return t;
}

// States from which some accepting lasso starts, by direct reachability.
inline std::vector<char> reference_live(const Buchi& b) {
    const std::size_t n = b.size();
    auto reach = [&](std::size_t from) {
        std::vector<char> seen(n, 0);
        std::vector<std::size_t> stack{from};
        while (!stack.empty()) {
            std::size_t q = stack.back();
            stack.pop_back();
            for (const auto& e : b.succ[q])
                if (!seen[std::size_t(e.to)]) {
                    seen[std::size_t(e.to)] = 1;
                    stack.push_back(std::size_t(e.to));
                }
        }
        return seen; // states reachable in at least one step
    };
    std::vector<std::vector<char>> r(n);
    for (std::size_t q = 0; q < n; ++q) r[q] = reach(q);
    std::vector<char> live(n, 0);
    for (std::size_t q = 0; q < n; ++q)
        for (std::size_t f = 0; f < n; ++f)
            if (b.is_final(int(f)) && r[f][f] && (f == q || r[q][f])) live[q] = 1;
    return live;
}

// w in Pref(L(B)) by subset simulation against the reference live set.
inline bool reference_in_pref(const Buchi& b, const std::vector<char>& live, const Word& w) {
    std::set<int> cur(b.initial.begin(), b.initial.end());
    for (Symbol a : w) {
        std::set<int> nxt;
        for (int q : cur)
            for (const auto& e : b.succ[std::size_t(q)])
                if (e.symbol == a) nxt.insert(e.to);
        cur = std::move(nxt);
    }
    for (int q : cur)
        if (live[std::size_t(q)]) return true;
    return false;
}

// Symbol-by-symbol equality on a long window.
inline bool same_up_by_window(const UPWord& x, const UPWord& y, std::size_t window) {
    for (std::size_t i = 0; i < window; ++i)
        if (x.at(i) != y.at(i)) return false;
    return true;
}

// All UP words s(p) with |s| + |p| <= bound and p non-empty.
inline std::vector<UPWord> extensions(const Alphabet& in, std::size_t bound) {
    std::vector<UPWord> out;
    std::set<std::pair<Word, Word>> seen;
    for (std::size_t lp = 1; lp <= bound; ++lp)
        for (const auto& p : enumerate_words(in, lp, lp))
            for (const auto& s : enumerate_words(in, 0, bound - lp)) {
                UPWord y = up_normalize(s, p);
                if (seen.emplace(y.prefix, y.period).second) out.push_back(y);
            }
    return out;
}

} // namespace omega::test
