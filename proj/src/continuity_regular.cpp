#include "omega/continuity_regular.hpp"

#include <map>
#include <sstream>
#include <unordered_map>

namespace omega {

Word project(const Word& w) {
    Word out;
    for (Symbol s : w)
        if (base_of(s) != kEndmarker) out.push_back(base_of(s));
    return out;
}

TwoWay search_machine(const TwoWay& t) { return t.lookahead ? eliminate_lookahead(t) : t; }

namespace {

struct Candidate {
    Word u1, u2, u3;
    Word rho;
};

struct Context {
    const TwoWay& t;
    TwoWay tt;
    PrefDomain pref;
    Variant variant;

    Context(const TwoWay& t, Variant v, const SearchOptions& opt)
        : t(t), tt(search_machine(t)), pref(t, opt.state_cap, opt.ext_bound), variant(v) {}

    std::unordered_map<Word, bool, WordHash> idem;
    std::map<std::pair<Word, Word>, bool> limit_in_dom;

    bool idempotent(const Word& u2) {
        auto it = idem.find(u2);
        if (it != idem.end()) return it->second;
        bool r = is_idempotent(tt, u2);
        idem.emplace(u2, r);
        return r;
    }

    bool limit_ok(const Word& u1, const Word& u2) {
        if (variant == Variant::UCont) return true;
        auto key = std::make_pair(project(u1), project(u2));
        auto it = limit_in_dom.find(key);
        if (it != limit_in_dom.end()) return it->second;
        bool r = eval_up_2way(t, up_normalize(key.first, key.second)).defined();
        limit_in_dom.emplace(key, r);
        return r;
    }

    std::optional<Word> rho_of(const Word& u1, const Word& u2, const Word& u3) {
        try {
            return rho(tt, u1, u2, u3);
        } catch (const DecomposeError&) {
            return std::nullopt;
        }
    }
};

std::optional<std::size_t> rho_mismatch(const Word& a, const Word& b) { return mismatch(a, b); }

// Depth-first enumeration of Pref(dom) words of one exact length, in lexicographic order.
class WordWalker {
public:
    WordWalker(const Context& ctx, const std::vector<Symbol>& first, const std::vector<Symbol>& letters)
        : ctx_(ctx), first_(first), letters_(letters) {}

    template <class F>
    void each(std::size_t len, F&& f) {
        const Nfa* nfa = ctx_.pref.nfa();
        Word w;
        if (first_.empty()) {
            std::vector<int> start = nfa ? nfa->initial : std::vector<int>{};
            walk(w, start, len, f);
            return;
        }
        for (Symbol s : first_) {
            w.assign(1, s);
            std::vector<int> set;
            if (nfa) {
                set = nfa->step(nfa->initial, s);
                if (set.empty()) continue;
            } else if (!ctx_.pref.contains(w)) {
                continue;
            }
            walk(w, set, len + 1, f);
        }
    }

private:
    template <class F>
    void walk(Word& w, const std::vector<int>& set, std::size_t len, F& f) {
        if (w.size() == len) {
            f(w);
            return;
        }
        const Nfa* nfa = ctx_.pref.nfa();
        for (Symbol s : letters_) {
            w.push_back(s);
            std::vector<int> nxt;
            bool ok;
            if (nfa) {
                nxt = nfa->step(set, s);
                ok = !nxt.empty();
            } else {
                ok = ctx_.pref.contains(w);
            }
            if (ok) walk(w, nxt, len, f);
            w.pop_back();
        }
    }

    const Context& ctx_;
    std::vector<Symbol> first_, letters_;
};

bool verify_with(const TwoWay& t, const TwoWay& tt, const PrefDomain& pref, const RegularWitness& w, std::size_t n);

} // namespace

SearchResult search_witness(const TwoWay& t, Variant variant, const SearchBounds& bounds, const SearchOptions& opt) {
    if (bounds.max_len_u1 < 1 || bounds.max_len_u2 < 1 || bounds.max_len_u3 < 1 || bounds.verify_n < 1)
        throw InputError("search bounds must be at least 1");
    Context ctx(t, variant, opt);
    SearchResult res;
    res.exact_prefix_check = ctx.pref.exact();

    std::vector<Symbol> first, letters;
    if (t.lookahead) {
        for (Symbol s : ctx.tt.input.symbols()) (base_of(s) == kEndmarker ? first : letters).push_back(s);
    } else {
        letters = t.input.symbols();
    }
    const std::size_t lead = first.empty() ? 0 : 1;
    WordWalker walker(ctx, first, letters);

    // per (pi(u1), pi(u2)): distinct rho values, each with its first triple
    std::map<std::pair<Word, Word>, std::map<Word, Candidate>> groups;
    const std::size_t max_total = bounds.max_len_u1 + bounds.max_len_u2 + bounds.max_len_u3;

    for (std::size_t total = 1; total <= max_total && !res.witness; ++total) {
        walker.each(total, [&](const Word& w) {
            if (res.witness) return;
            for (std::size_t l1 = 0; l1 <= bounds.max_len_u1 && l1 < total; ++l1)
                for (std::size_t l2 = 1; l2 <= bounds.max_len_u2 && l1 + l2 <= total; ++l2) {
                    if (res.witness) return;
                    std::size_t l3 = total - l1 - l2;
                    if (l3 > bounds.max_len_u3) continue;
                    Word u1 = w.substr(0, lead + l1), u2 = w.substr(lead + l1, l2), u3 = w.substr(lead + l1 + l2);
                    if (!ctx.idempotent(u2)) continue;
                    if (!ctx.limit_ok(u1, u2)) continue;
                    auto r = ctx.rho_of(u1, u2, u3);
                    if (!r) continue;
                    ++res.triples;
                    auto& group = groups[{project(u1), project(u2)}];
                    if (group.count(*r)) continue;
                    for (const auto& [other_rho, c] : group) {
                        auto pos = rho_mismatch(other_rho, *r);
                        if (!pos) continue;
                        RegularWitness wit{variant, c.u1, c.u2, c.u3, u1, u2, u3, *pos, c.rho, *r};
                        if (verify_with(t, ctx.tt, ctx.pref, wit, bounds.verify_n)) {
                            res.witness = wit;
                            return;
                        }
                    }
                    group.emplace(*r, Candidate{u1, u2, u3, *r});
                }
        });
    }
    return res;
}

namespace {

bool verify_with(const TwoWay& t, const TwoWay& tt, const PrefDomain& pref, const RegularWitness& w, std::size_t n) {
    auto letters_ok = [&](const Word& x) {
        for (Symbol s : x)
            if (tt.symbol_index(s) < 0) return false;
        return true;
    };
    for (const Word* x : {&w.u1, &w.u2, &w.u3, &w.u1p, &w.u2p, &w.u3p})
        if (!letters_ok(*x)) return false;
    if (w.u2.empty() || w.u2p.empty()) return false;
    if (project(w.u1) != project(w.u1p) || project(w.u2) != project(w.u2p)) return false;
    if (!is_idempotent(tt, w.u1, w.u2, w.u3) || !is_idempotent(tt, w.u1p, w.u2p, w.u3p)) return false;
    if (w.variant == Variant::Cont && !eval_up_2way(t, up_normalize(project(w.u1), project(w.u2))).defined()) return false;

    Word r1, r2;
    try {
        r1 = rho(tt, w.u1, w.u2, w.u3);
        r2 = rho(tt, w.u1p, w.u2p, w.u3p);
    } catch (const DecomposeError&) {
        return false;
    }
    const std::size_t i = w.mismatch_position;
    if (i >= r1.size() || i >= r2.size() || r1[i] == r2[i]) return false;

    for (std::size_t k = 1; k <= n; ++k) {
        Word a = w.u1 + power(w.u2, k) + w.u3;
        Word b = w.u1p + power(w.u2p, k) + w.u3p;
        if (!pref.contains(a) || !pref.contains(b)) return false;
        FiniteRun ra = run_finite(tt, a), rb = run_finite(tt, b);
        if (ra.exit != FiniteExit::RightEnd || rb.exit != FiniteExit::RightEnd) return false;
        if (i >= ra.output.size() || i >= rb.output.size() || ra.output[i] == rb.output[i]) return false;
    }
    return true;
}

} // namespace

bool verify_witness(const TwoWay& t, const RegularWitness& w, std::size_t n, const SearchOptions& opt) {
    return verify_with(t, search_machine(t), PrefDomain(t, opt.state_cap, opt.ext_bound), w, n);
}

std::string format_witness(const TwoWay& t, const RegularWitness& w) {
    auto show = [&](const Word& x) {
        return t.lookahead ? format_annotated(x, t.lookahead->names) : format_word(x);
    };
    std::ostringstream os;
    os << "u1  = " << show(w.u1) << "\nu2  = " << show(w.u2) << "\nu3  = " << show(w.u3) << "\n";
    os << "u1' = " << show(w.u1p) << "\nu2' = " << show(w.u2p) << "\nu3' = " << show(w.u3p) << "\n";
    os << "rho  = " << format_word(w.rho1) << "\nrho' = " << format_word(w.rho2) << "\n";
    os << "mismatch at " << w.mismatch_position << "\n";
    os << "limit = " << format_up(up_normalize(project(w.u1), project(w.u2))) << "\n";
    return os.str();
}

} // namespace omega
