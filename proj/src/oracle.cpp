#include "omega/oracle.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include "omega/graph.hpp"

namespace omega {

Evaluator evaluator_of(const Nft& t) {
    return [&t](const UPWord& x) -> std::optional<UPWord> {
        try {
            return eval_up(t, x);
        } catch (const EpsilonLoopOutput&) {
            return std::nullopt;
        }
    };
}

Evaluator evaluator_of(const TwoWay& t) {
    return [&t](const UPWord& x) { return eval_up_2way(t, x).output; };
}

UPWord BadPair::first(std::size_t n) const { return up_concat(u + power(v, n) + w, z); }
UPWord BadPair::second(std::size_t n) const { return up_concat(u + power(v, n) + w2, z2); }

namespace {

using Images = std::vector<UPWord>; // index n-1

// The first mismatch must sit at the same position for every sampled n; a
// position that drifts with n means the two families still converge.
std::optional<std::size_t> common_mismatch(const Images& a, const Images& b) {
    std::optional<std::size_t> pos;
    for (std::size_t n = 0; n < a.size(); ++n) {
        auto m = mismatch(a[n], b[n]);
        if (!m || (pos && *m != *pos)) return std::nullopt;
        pos = m;
    }
    return pos;
}

bool divergent(const Images& a) {
    if (a.size() < 2) return false;
    const std::size_t c = lcp(a[0], a[1]);
    if (c == kInfinity) return false;
    for (std::size_t n = 1; n + 1 < a.size(); ++n)
        if (lcp(a[n], a[n + 1]) != c) return false;
    return true;
}

struct Memo {
    const Evaluator& f;
    std::unordered_map<UPWord, std::optional<UPWord>, UPWordHash> cache;
    std::size_t calls = 0;

    const std::optional<UPWord>& operator()(const UPWord& x) {
        auto it = cache.find(x);
        if (it != cache.end()) return it->second;
        ++calls;
        return cache.emplace(x, f(x)).first->second;
    }
};

std::vector<UPWord> periods(const Alphabet& in, std::size_t bound) {
    std::vector<UPWord> out;
    std::set<std::pair<Word, Word>> seen;
    for (const auto& p : enumerate_words(in, 1, bound)) {
        UPWord z = up_normalize(Word(), p);
        if (seen.emplace(z.prefix, z.period).second) out.push_back(z);
    }
    return out;
}

} // namespace

BruteForceResult brute_force_check(const Evaluator& f, const Alphabet& input, Variant variant, std::size_t bound) {
    const std::size_t n_max = 2 * bound + 2;
    Memo memo{f, {}, 0};
    BruteForceResult res;
    res.bound = bound;
    const auto words = enumerate_words(input, 0, bound);
    const auto loops = enumerate_words(input, 1, bound);
    const auto tails = periods(input, bound);

    // Images are computed for n = 1, 2 first and completed only when a family
    // can still be reported; a family with an undefined image is dropped then.
    struct Family {
        const Word* w;
        const UPWord* z;
        Images images;
        int status = 0; // 0 partial, 1 complete, -1 some image undefined
        std::size_t group = 0;
    };

    for (const auto& u : words)
        for (const auto& v : loops) {
            std::optional<UPWord> fx;
            if (variant == Variant::Cont) {
                fx = memo(up_normalize(u, v));
                if (!fx) continue;
            }
            auto complete = [&](Family& fam) {
                for (std::size_t n = fam.images.size() + 1; fam.status == 0 && n <= n_max; ++n) {
                    const auto& img = memo(up_concat(u + power(v, n) + *fam.w, *fam.z));
                    if (!img) fam.status = -1;
                    else fam.images.push_back(*img);
                }
                if (fam.status == 0) fam.status = 1;
                return fam.status > 0;
            };
            auto report = [&](BadPair p) {
                res.pair = std::move(p);
                res.evaluations = memo.calls;
            };
            std::vector<Family> fams;
            fams.reserve(words.size() * tails.size());
            // families grouped by their n = 1 image: a pair needs a mismatch there
            std::unordered_map<UPWord, std::size_t, UPWordHash> group_of;
            std::vector<UPWord> group_key;
            for (const auto& w : words)
                for (const auto& z : tails) {
                    Family fam{&w, &z, {}};
                    bool ok = true;
                    for (std::size_t n = 1; n <= std::min<std::size_t>(2, n_max) && ok; ++n) {
                        const auto& img = memo(up_concat(u + power(v, n) + w, z));
                        if (img) fam.images.push_back(*img);
                        else ok = false;
                    }
                    if (!ok) continue;
                    BadPair p{u, v, w, Word(), z, up_normalize(Word(), v)};
                    if (fam.images.size() > 1 && lcp(fam.images[0], fam.images[1]) != kInfinity) {
                        if (!complete(fam)) continue;
                        if (divergent(fam.images)) {
                            p.evidence = Evidence::Divergent;
                            report(p);
                            return res;
                        }
                    }
                    if (variant == Variant::Cont) {
                        if (!mismatch(fam.images[0], *fx) || !complete(fam)) continue;
                        Images constant(n_max, *fx);
                        if (auto i = common_mismatch(fam.images, constant)) {
                            p.position = *i;
                            report(p);
                            return res;
                        }
                        continue;
                    }
                    std::vector<char> differs(group_key.size());
                    for (std::size_t g = 0; g < group_key.size(); ++g)
                        differs[g] = mismatch(fam.images[0], group_key[g]).has_value();
                    for (auto& other : fams) {
                        if (!differs[other.group]) continue;
                        if (!complete(fam)) {
                            ok = false;
                            break;
                        }
                        if (!complete(other)) continue;
                        if (auto i = common_mismatch(fam.images, other.images)) {
                            p.w2 = *other.w;
                            p.z2 = *other.z;
                            p.position = *i;
                            report(p);
                            return res;
                        }
                    }
                    if (!ok) continue;
                    auto [it, fresh] = group_of.emplace(fam.images[0], group_key.size());
                    if (fresh) group_key.push_back(fam.images[0]);
                    fam.group = it->second;
                    fams.push_back(std::move(fam));
                }
        }
    res.evaluations = memo.calls;
    return res;
}

BruteForceResult brute_force_check(const Nft& t, Variant variant, std::size_t bound) {
    return brute_force_check(evaluator_of(t), t.input, variant, bound);
}

BruteForceResult brute_force_check(const TwoWay& t, Variant variant, std::size_t bound) {
    return brute_force_check(evaluator_of(t), t.input, variant, bound);
}

bool validate_bad_pair(const Evaluator& f, const BadPair& p, std::size_t n_max) {
    Images a, b;
    for (std::size_t n = 1; n <= n_max; ++n) {
        auto x = f(p.first(n));
        auto y = f(p.second(n));
        if (!x || !y) return false;
        a.push_back(*x);
        b.push_back(*y);
    }
    if (p.evidence == Evidence::Divergent) return divergent(p.side == 1 ? a : b);
    auto i = common_mismatch(a, b);
    return i && *i == p.position;
}

std::string format_bad_pair(const BadPair& p) {
    std::ostringstream os;
    os << "u = " << format_word(p.u) << "\nv = " << format_word(p.v) << "\n";
    os << "w = " << format_word(p.w) << ", z = " << format_up(p.z) << "\n";
    os << "w' = " << format_word(p.w2) << ", z' = " << format_up(p.z2) << "\n";
    if (p.evidence == Evidence::MismatchAt) {
        os << "mismatch at " << p.position << "\n";
    } else {
        os << "family " << p.side << " diverges\n";
    }
    return os.str();
}

Profile parse_profile(const std::string& s) {
    if (s == "tiny") return {2, 2, 2, 1};
    if (s == "small") return {3, 2, 2, 2};
    if (s == "default") return {};
    Profile p;
    std::size_t vals[4];
    std::istringstream in(s);
    std::string part;
    for (int i = 0; i < 4; ++i) {
        if (!std::getline(in, part, ',')) throw InputError("profile is tiny, small, default or s,i,o,m");
        try {
            vals[i] = std::stoul(part);
        } catch (const std::exception&) {
            throw InputError("profile field `" + part + "` is not a number");
        }
    }
    p = {vals[0], vals[1], vals[2], vals[3]};
    if (p.states < 1 || p.input < 1 || p.output < 1 || p.input > 26 || p.output > 26)
        throw InputError("profile values out of range");
    return p;
}

namespace {

bool epsilon_accepting_cycle(const Nft& t) {
    graph::Adjacency adj(t.size());
    for (std::size_t q = 0; q < t.size(); ++q)
        for (const auto& e : t.succ[q])
            if (e.out.empty()) adj[q].push_back(e.to);
    auto s = graph::tarjan(adj);
    for (std::size_t q = 0; q < t.size(); ++q)
        if (t.final[q] && s.comp[q] >= 0 && s.nontrivial[std::size_t(s.comp[q])]) return true;
    return false;
}

std::optional<Nft> attempt(std::uint64_t seed, const Profile& pr) {
    std::mt19937_64 rng(seed);
    auto pick = [&](std::size_t n) { return std::size_t(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)); };
    auto coin = [&](double p) { return std::bernoulli_distribution(p)(rng); };
    std::vector<Symbol> in, out;
    for (std::size_t i = 0; i < pr.input; ++i) in.push_back(Symbol(U'a' + i));
    for (std::size_t i = 0; i < pr.output; ++i) out.push_back(Symbol(U'a' + i));
    Nft t;
    t.input = Alphabet(in);
    t.output = Alphabet(out);
    auto output = [&] {
        Word w;
        const std::size_t len = pick(pr.max_out + 1);
        for (std::size_t i = 0; i < len; ++i) w.push_back(out[pick(out.size())]);
        return w;
    };
    const std::size_t lo = (pr.states + 1) / 2;
    const std::size_t n = lo + pick(pr.states - lo + 1);
    for (std::size_t q = 0; q < n; ++q) t.add_state("q" + std::to_string(q), coin(0.35));
    t.set_initial(0);
    if (n >= 4 && in.size() >= 2 && coin(0.5)) {
        // Two guessed branches with disjoint domains: "infinitely many x" read
        // deterministically, "eventually no x" by a guess. Each branch applies
        // its own letter-to-word map, so the machine is functional.
        const Symbol x = in[pick(in.size())];
        std::vector<Word> ha, hb;
        for (std::size_t i = 0; i < in.size(); ++i) {
            ha.push_back(output());
            hb.push_back(output());
        }
        std::fill(t.final.begin(), t.final.end(), 0);
        t.final[1] = t.final[3] = 1;
        t.set_initial(2);
        for (std::size_t i = 0; i < in.size(); ++i) {
            const Symbol a = in[i];
            const int to_a = a == x ? 1 : 0;
            for (int q : {0, 1})
                if (coin(0.9)) t.add_edge(q, a, to_a, ha[i]);
            if (coin(0.9)) t.add_edge(2, a, 2, hb[i]);
            if (a != x) {
                t.add_edge(2, a, 3, hb[i]);
                t.add_edge(3, a, 3, hb[i]);
            }
        }
    } else {
        t.final[pick(n)] = 1;
        if (n > 1 && coin(0.3)) t.set_initial(int(1 + pick(n - 1)));
        for (std::size_t q = 0; q < n; ++q)
            for (Symbol a : in) {
                if (!coin(0.75)) continue;
                t.add_edge(int(q), a, int(pick(n)), output());
                if (coin(0.3)) t.add_edge(int(q), a, int(pick(n)), output());
            }
    }
    Nft r = trim(t);
    if (r.size() == 0 || r.initial.empty()) return std::nullopt;
    if (epsilon_accepting_cycle(r)) return std::nullopt;
    try {
        if (functionality_check(r, 8, 20000)) return std::nullopt;
    } catch (const BudgetExceeded&) {
        return std::nullopt;
    }
    return r;
}

} // namespace

Nft random_instance(std::uint64_t seed, const Profile& profile) {
    std::uint64_t s = seed;
    for (int tries = 0; tries < 10000; ++tries) {
        if (auto t = attempt(s, profile)) return *t;
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    }
    throw std::runtime_error("random_instance: no admissible machine found");
}

} // namespace omega
