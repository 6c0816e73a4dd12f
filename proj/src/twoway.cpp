#include "omega/twoway.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <unordered_set>

namespace omega {

int TwoWay::add_state(std::string name, bool is_final) {
    names.push_back(std::move(name));
    final.push_back(char(is_final));
    return int(names.size()) - 1;
}

int TwoWay::state(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return int(i);
    return -1;
}

void TwoWay::add_rule(int from, Symbol a, int la, int to, Word out, int dir) {
    rules.push_back({from, a, la, to, std::move(out), dir});
}

std::size_t TwoWay::max_output() const {
    std::size_t m = 0;
    for (const auto& r : rules) m = std::max(m, r.out.size());
    return m;
}

void TwoWay::finalize() {
    std::vector<Symbol> syms = input.symbols();
    if (endmarker) {
        if (input.contains(kEndmarker)) throw InputError("the endmarker ^ is reserved");
        syms.push_back(kEndmarker);
    }
    tape_ = Alphabet(syms);
    if (names.empty()) throw InputError("two-way machine without states");
    if (initial < 0 || initial >= int(size())) throw InputError("initial state out of range");
    if (lookahead) {
        lookahead->validate();
        if (!(lookahead->alphabet == tape_)) throw InputError("look-ahead alphabet must be the input alphabet plus ^");
    }
    const std::size_t np = std::size_t(la_count());
    table_.assign(size() * tape_.size() * np, Move{});
    for (const auto& r : rules) {
        if (r.from < 0 || r.from >= int(size()) || r.to < 0 || r.to >= int(size()))
            throw InputError("transition state out of range");
        int s = tape_.index(r.symbol);
        if (s < 0) throw InputError("transition symbol " + format_symbol(r.symbol) + " outside the input alphabet");
        if (r.dir != 1 && r.dir != -1) throw InputError("direction must be +1 or -1");
        if (!output.contains(r.out)) throw InputError("output symbol outside the output alphabet");
        int la = r.la;
        if (lookahead) {
            if (la < 0 || la >= int(np)) throw InputError("transition without a valid look-ahead state");
        } else {
            if (la != -1) throw InputError("look-ahead state given but no look-ahead declared");
            la = 0;
        }
        Move& m = table_[(std::size_t(r.from) * tape_.size() + std::size_t(s)) * np + std::size_t(la)];
        if (m.to >= 0) {
            if (m.to == r.to && m.out == r.out && m.dir == r.dir) continue;
            throw InputError("nondeterministic transitions for state " + names[std::size_t(r.from)] + " on " +
                             format_symbol(r.symbol));
        }
        m = Move{r.to, r.out, r.dir};
    }
}

std::vector<int> annotation_states(const Buchi& p, const UPWord& tape) {
    const std::size_t len = tape.classes();
    auto acc = suffix_acceptance(p, tape);
    std::vector<int> out(len, -1);
    for (std::size_t i = 0; i < len; ++i) {
        int found = -1;
        for (std::size_t q = 0; q < p.size(); ++q) {
            if (!acc[q * len + i]) continue;
            if (found >= 0)
                throw AnnotationError("look-ahead is not codeterministic on " + format_up(up_suffix(tape, i)));
            found = int(q);
        }
        if (found < 0) throw AnnotationError("look-ahead accepts no state for " + format_up(up_suffix(tape, i)));
        out[i] = found;
    }
    return out;
}

UPWord good_annotation(const Buchi& p, const UPWord& x) {
    UPWord tape = up_concat(Word(1, kEndmarker), x);
    auto st = annotation_states(p, tape);
    Word pre, per;
    for (std::size_t i = 0; i < tape.prefix.size(); ++i) pre.push_back(annotate(tape.prefix[i], st[i]));
    for (std::size_t i = 0; i < tape.period.size(); ++i)
        per.push_back(annotate(tape.period[i], st[tape.prefix.size() + i]));
    return up_normalize(pre, per);
}

std::string describe(NotInDomain r) {
    switch (r) {
    case NotInDomain::None: return "defined";
    case NotInDomain::Blocked: return "blocked";
    case NotInDomain::Trapped: return "trapped";
    case NotInDomain::NoFinal: return "no-final-infinitely-often";
    case NotInDomain::FiniteOutput: return "finite-output";
    }
    return "unknown";
}

TwoWayResult eval_up_2way(const TwoWay& t, const UPWord& x) {
    UPWord tape = t.endmarker ? up_concat(Word(1, kEndmarker), x) : x;
    std::vector<int> ann;
    if (t.lookahead) ann = annotation_states(*t.lookahead, tape);
    const std::size_t m = tape.prefix.size(), len = tape.period.size();
    auto cls = [&](std::size_t c) { return c < m ? c : m + (c - m) % len; };
    std::vector<int> sym(tape.classes());
    for (std::size_t i = 0; i < sym.size(); ++i) {
        sym[i] = t.symbol_index(tape.at(i));
        if (sym[i] < 0) throw InputError("symbol " + format_symbol(tape.at(i)) + " outside the input alphabet");
    }

    struct Event {
        std::size_t time;
        int state;
        std::size_t cell;
    };
    std::vector<Event> events;
    std::vector<std::vector<std::size_t>> by_key(t.size() * len);
    std::vector<int> step_state, step_la;
    std::vector<std::size_t> out_before;
    std::unordered_set<std::uint64_t> seen;
    Word out;
    int q = t.initial;
    std::size_t c = 0;
    TwoWayResult res;
    const std::size_t kMaxSteps = 50'000'000;
    for (std::size_t time = 0;; ++time) {
        if (time > kMaxSteps) throw std::runtime_error("eval_up_2way: step limit exceeded");
        if (!seen.insert(std::uint64_t(c) * t.size() + std::uint64_t(q)).second) {
            res.reason = NotInDomain::Trapped;
            return res;
        }
        std::size_t k = cls(c);
        int la = t.lookahead ? ann[k] : 0;
        const Move& mv = t.move(q, sym[k], la);
        if (mv.to < 0 || (mv.dir < 0 && c == 0)) {
            res.reason = NotInDomain::Blocked;
            return res;
        }
        step_state.push_back(q);
        step_la.push_back(la);
        out_before.push_back(out.size());
        out += mv.out;
        q = mv.to;
        c = mv.dir > 0 ? c + 1 : c - 1;
        while (!events.empty() && events.back().cell > c) {
            const auto& e = events.back();
            by_key[std::size_t(e.state) * len + (e.cell - m) % len].pop_back();
            events.pop_back();
        }
        if (mv.dir < 0 || c < m) continue;
        auto& slot = by_key[std::size_t(q) * len + (c - m) % len];
        if (!slot.empty()) {
            std::size_t t1 = events[slot.back()].time, t2 = time + 1;
            bool fin = false;
            for (std::size_t s = t1; s < t2 && !fin; ++s)
                fin = t.lookahead ? t.lookahead->is_final(step_la[s]) : t.is_final(step_state[s]);
            Word seg = out.substr(out_before[t1]);
            if (!fin) {
                res.reason = NotInDomain::NoFinal;
            } else if (seg.empty()) {
                res.reason = NotInDomain::FiniteOutput;
            } else {
                res.output = up_normalize(out.substr(0, out_before[t1]), seg);
            }
            return res;
        }
        slot.push_back(events.size());
        events.push_back({time + 1, q, c});
    }
}

TwoWay eliminate_lookahead(const TwoWay& t) {
    if (!t.lookahead) throw InputError("machine has no look-ahead");
    const Buchi& p = *t.lookahead;
    const auto& tape = t.tape().symbols();
    const int np = int(p.size());
    TwoWay r;
    r.endmarker = false;
    r.output = t.output;
    r.annotation_names = p.names;
    std::vector<Symbol> letters;
    for (Symbol a : tape)
        for (int x = 0; x < np; ++x) letters.push_back(annotate(a, x));
    r.input = Alphabet(letters);
    const int nq = int(t.size());
    for (int q = 0; q < nq; ++q) r.add_state(t.names[std::size_t(q)], false);
    const int na = int(tape.size());
    auto probe = [&](int q, int a, int x) { return nq + (q * na + a) * np + x; };
    auto checked = [&](int q, int a, int x) { return nq + nq * na * np + (q * na + a) * np + x; };
    for (int q = 0; q < nq; ++q)
        for (int a = 0; a < na; ++a)
            for (int x = 0; x < np; ++x)
                r.add_state(t.names[std::size_t(q)] + "!" + to_utf8(Word(1, tape[std::size_t(a)])) + "!" + p.names[std::size_t(x)]);
    for (int q = 0; q < nq; ++q)
        for (int a = 0; a < na; ++a)
            for (int x = 0; x < np; ++x)
                r.add_state(t.names[std::size_t(q)] + "@" + to_utf8(Word(1, tape[std::size_t(a)])) + "@" + p.names[std::size_t(x)],
                            p.is_final(x));
    r.initial = t.initial;
    for (int q = 0; q < nq; ++q)
        for (int a = 0; a < na; ++a)
            for (int x = 0; x < np; ++x) {
                Symbol letter = annotate(tape[std::size_t(a)], x);
                r.add_rule(q, letter, -1, probe(q, a, x), Word(), +1);
                for (const auto& e : p.succ[std::size_t(x)]) {
                    if (e.symbol != tape[std::size_t(a)]) continue;
                    for (Symbol b : tape) r.add_rule(probe(q, a, x), annotate(b, e.to), -1, checked(q, a, x), Word(), -1);
                }
                const Move& mv = t.move(q, a, x);
                if (mv.to >= 0) r.add_rule(checked(q, a, x), letter, -1, mv.to, mv.out, mv.dir);
            }
    r.finalize();
    return r;
}

FiniteRun run_finite(const TwoWay& t, const Word& w, bool record) {
    if (t.lookahead) throw InputError("run_finite needs a machine without look-ahead");
    std::vector<int> tape;
    tape.reserve(w.size() + 1);
    if (t.endmarker) tape.push_back(t.symbol_index(kEndmarker));
    for (Symbol s : w) {
        int i = t.symbol_index(s);
        if (i < 0) throw InputError("symbol " + format_symbol(s) + " outside the input alphabet");
        tape.push_back(i);
    }
    const std::size_t n = tape.size();
    FiniteRun run;
    std::vector<char> seen(n * t.size(), 0);
    int q = t.initial;
    std::size_t c = 0;
    while (true) {
        if (c == n) {
            run.exit = FiniteExit::RightEnd;
            run.exit_state = q;
            return run;
        }
        char& mark = seen[c * t.size() + std::size_t(q)];
        if (mark) {
            run.exit = FiniteExit::Looped;
            return run;
        }
        mark = 1;
        const Move& mv = t.move(q, tape[c]);
        if (mv.to < 0 || (mv.dir < 0 && c == 0)) {
            run.exit = FiniteExit::Blocked;
            return run;
        }
        if (record) {
            run.states.push_back(q);
            run.cells.push_back(int(c));
            run.out_before.push_back(run.output.size());
        }
        run.output += mv.out;
        q = mv.to;
        c = mv.dir > 0 ? c + 1 : c - 1;
    }
}

namespace {

class CrossingBuilder {
public:
    CrossingBuilder(const TwoWayAcceptor& a, std::size_t budget) : a_(a), budget_(budget) {
        nl_ = a.letters.size();
        std::vector<char> entry(std::size_t(a.nstates), 0);
        for (std::size_t i = 0; i < a.to.size(); ++i)
            if (a.to[i] >= 0 && a.dir[i] < 0) entry[std::size_t(a.to[i])] = 1;
        for (int q = 0; q < a.nstates; ++q)
            if (entry[std::size_t(q)]) right_entries_.push_back(q);
    }

    // A node is a right crossing sequence (odd length: pairs of out/back
    // crossings, then the final rightward one) plus breakpoint bookkeeping.
    // Local consistency alone admits excursions that never come back, so the
    // excursions pending at the last breakpoint are tracked until all of them
    // have turned around. Accepting nodes are breakpoints reached after both a
    // final state and a non-empty output since the previous accepting node.
    struct Node {
        std::vector<int> seq;
        std::uint64_t mask = 0;
        int flags = 0; // 1: final seen, 2: output seen
        bool accepting = false;
        auto operator<=>(const Node&) const = default;
    };

    Buchi build() {
        Buchi b;
        b.alphabet = Alphabet(a_.letters);
        std::deque<int> todo;
        auto get = [&](const Node& key) {
            auto it = ids_.find(key);
            if (it != ids_.end()) return it->second;
            if (ids_.size() >= budget_) throw StateCapExceeded("crossing-sequence automaton exceeds the node budget");
            std::string name;
            for (std::size_t i = 0; i < key.seq.size(); ++i) name += (i ? "," : "") + std::to_string(key.seq[i]);
            name += "|" + std::to_string(key.mask) + "|" + std::to_string(key.flags) + (key.accepting ? "|F" : "|-");
            int id = b.add_state(name, key.accepting);
            ids_.emplace(key, id);
            keys_.push_back(key);
            todo.push_back(id);
            return id;
        };
        b.set_initial(get(Node{{a_.initial}, 0, 0, false}));
        while (!todo.empty()) {
            int id = todo.front();
            todo.pop_front();
            const Node cur = keys_[std::size_t(id)];
            for (std::size_t l = 0; l < nl_; ++l) {
                results_.clear();
                enumerate(cur.seq, l);
                for (const auto& r : results_) b.add_edge(id, a_.letters[l], get(successor(cur, r)));
            }
        }
        return b;
    }

private:
    struct Step {
        std::vector<int> right;
        std::vector<int> parent; // per right excursion: index of the left segment it was made in
        int flags = 0;
        auto operator<=>(const Step&) const = default;
    };

    const TwoWayAcceptor& a_;
    std::size_t budget_;
    std::size_t nl_ = 0;
    std::vector<int> right_entries_;
    std::map<Node, int> ids_;
    std::vector<Node> keys_;
    std::set<Step> results_;
    std::size_t work_ = 0;

    int rank(int q) const { return a_.rank.empty() ? 0 : a_.rank[std::size_t(q)]; }
    std::size_t base(int q) const { return a_.base.empty() ? std::size_t(q) : std::size_t(a_.base[std::size_t(q)]); }

    static std::uint64_t all_excursions(const std::vector<int>& seq) {
        const std::size_t n = seq.size() / 2;
        if (n >= 64) throw StateCapExceeded("crossing sequence too long");
        return (std::uint64_t(1) << n) - 1;
    }

    Node successor(const Node& from, const Step& s) const {
        Node n;
        n.seq = s.right;
        for (std::size_t j = 0; j < s.parent.size(); ++j)
            if (from.mask >> s.parent[j] & 1) n.mask |= std::uint64_t(1) << j;
        const int flags = from.flags | s.flags;
        if (n.mask == 0) {
            n.accepting = flags == 3;
            n.mask = all_excursions(n.seq);
        }
        n.flags = n.accepting ? 0 : flags;
        return n;
    }

    void enumerate(const std::vector<int>& left, std::size_t l) {
        Step st;
        std::vector<char> visited(std::size_t(a_.nstates), 0);
        std::vector<char> out_used(std::size_t(a_.nstates), 0), in_used(std::size_t(a_.nstates), 0);
        rec(left, l, left[0], 1, st, visited, out_used, in_used);
    }

    void rec(const std::vector<int>& left, std::size_t l, int cur, std::size_t il, Step& st,
             std::vector<char>& visited, std::vector<char>& out_used, std::vector<char>& in_used) {
        if (++work_ > budget_ * 64) throw StateCapExceeded("crossing-sequence enumeration exceeds the work budget");
        if (visited[base(cur)]) return;
        visited[base(cur)] = 1;
        const int saved = st.flags;
        std::size_t idx = std::size_t(cur) * nl_ + l;
        if (a_.final[std::size_t(cur)]) st.flags |= 1;
        int nxt = a_.to[idx];
        if (nxt >= 0) {
            if (a_.produces.empty() || a_.produces[idx]) st.flags |= 2;
            auto& right = st.right;
            if (a_.dir[idx] > 0) {
                if (!out_used[base(nxt)] && (right.empty() || rank(nxt) >= rank(right.back()))) {
                    out_used[base(nxt)] = 1;
                    right.push_back(nxt);
                    if (il == left.size()) results_.insert(st);
                    st.parent.push_back(int((il - 1) / 2));
                    for (int r : right_entries_) {
                        if (in_used[base(r)] || rank(r) < rank(nxt)) continue;
                        in_used[base(r)] = 1;
                        right.push_back(r);
                        rec(left, l, r, il, st, visited, out_used, in_used);
                        right.pop_back();
                        in_used[base(r)] = 0;
                    }
                    st.parent.pop_back();
                    right.pop_back();
                    out_used[base(nxt)] = 0;
                }
            } else if (il + 1 < left.size() && left[il] == nxt) {
                rec(left, l, left[il + 1], il + 2, st, visited, out_used, in_used);
            }
        }
        st.flags = saved;
        visited[base(cur)] = 0;
    }
};

} // namespace

Buchi two_way_to_nba(const TwoWayAcceptor& a, std::size_t node_budget) {
    return CrossingBuilder(a, node_budget).build();
}

TwoWayAcceptor acceptor_of(const TwoWay& t) {
    TwoWayAcceptor a;
    a.nstates = int(t.size());
    a.initial = t.initial;
    const auto& tape = t.tape().symbols();
    const int np = t.la_count();
    for (Symbol s : tape)
        for (int p = 0; p < np; ++p) a.letters.push_back(t.lookahead ? annotate(s, p) : s);
    std::vector<std::pair<Symbol, std::pair<int, int>>> order;
    for (std::size_t s = 0; s < tape.size(); ++s)
        for (int p = 0; p < np; ++p) order.push_back({t.lookahead ? annotate(tape[s], p) : tape[s], {int(s), p}});
    std::sort(order.begin(), order.end());
    a.letters.clear();
    for (const auto& o : order) a.letters.push_back(o.first);
    const std::size_t nl = a.letters.size();
    a.to.assign(t.size() * nl, -1);
    a.dir.assign(t.size() * nl, 0);
    a.produces.assign(t.size() * nl, 0);
    for (std::size_t q = 0; q < t.size(); ++q)
        for (std::size_t l = 0; l < nl; ++l) {
            const Move& mv = t.move(int(q), order[l].second.first, order[l].second.second);
            a.to[q * nl + l] = mv.to;
            a.dir[q * nl + l] = static_cast<signed char>(mv.dir);
            a.produces[q * nl + l] = char(!mv.out.empty());
        }
    if (t.lookahead) {
        a.final.assign(t.size(), 1);
    } else {
        a.final = t.final;
    }
    return a;
}

Buchi annotation_checker(const Buchi& p, const std::vector<Symbol>& letters) {
    Buchi b;
    b.alphabet = Alphabet(letters);
    int start = b.add_state("start");
    b.set_initial(start);
    std::vector<int> id(letters.size());
    for (std::size_t i = 0; i < letters.size(); ++i) {
        int x = annotation_of(letters[i]);
        id[i] = b.add_state(format_symbol(base_of(letters[i])) + "," + p.names[std::size_t(x)], p.is_final(x));
    }
    for (std::size_t i = 0; i < letters.size(); ++i) {
        if (base_of(letters[i]) == kEndmarker) b.add_edge(start, letters[i], id[i]);
        Symbol a = base_of(letters[i]);
        int x = annotation_of(letters[i]);
        for (std::size_t j = 0; j < letters.size(); ++j) {
            if (base_of(letters[j]) == kEndmarker) continue;
            int y = annotation_of(letters[j]);
            bool ok = false;
            for (const auto& e : p.succ[std::size_t(x)]) ok = ok || (e.symbol == a && e.to == y);
            if (ok) b.add_edge(id[i], letters[j], id[j]);
        }
    }
    return b;
}

Buchi project_endmarked(const Buchi& b, const Alphabet& sigma) {
    Buchi r;
    r.alphabet = sigma;
    for (std::size_t q = 0; q < b.size(); ++q) r.add_state(b.names[q], b.final[q]);
    for (int q : b.initial)
        for (const auto& e : b.succ[std::size_t(q)])
            if (base_of(e.symbol) == kEndmarker) r.set_initial(e.to);
    for (std::size_t q = 0; q < b.size(); ++q)
        for (const auto& e : b.succ[q]) {
            Symbol a = base_of(e.symbol);
            if (a != kEndmarker && sigma.contains(a)) r.add_edge(int(q), a, e.to);
        }
    return trim(r);
}

Buchi domain_nba_tape(const TwoWay& t, std::size_t state_cap) {
    if (t.size() > state_cap)
        throw StateCapExceeded("machine has " + std::to_string(t.size()) + " states, cap is " + std::to_string(state_cap));
    auto acc = acceptor_of(t);
    Buchi cs = two_way_to_nba(acc);
    if (t.lookahead) return trim(product(cs, annotation_checker(*t.lookahead, acc.letters)));
    return trim(cs);
}

Buchi domain_nba(const TwoWay& t, std::size_t state_cap) {
    Buchi b = domain_nba_tape(t, state_cap);
    if (t.endmarker || t.lookahead) return project_endmarked(b, t.input);
    return b;
}

namespace {

std::vector<UPWord> extensions(const TwoWay& t, std::size_t bound) {
    Alphabet sigma = t.input;
    if (!t.endmarker && !t.lookahead) {
        std::vector<Symbol> plain;
        for (Symbol s : sigma.symbols())
            if (base_of(s) != kEndmarker) plain.push_back(s);
        sigma = Alphabet(plain);
    }
    std::vector<UPWord> all;
    for (std::size_t total = 1; total <= bound; ++total)
        for (std::size_t per = 1; per <= total; ++per) {
            std::size_t pre = total - per;
            for (const auto& u : enumerate_words(sigma, pre, pre))
                for (const auto& v : enumerate_words(sigma, per, per)) all.push_back(up_normalize(u, v));
        }
    std::vector<UPWord> uniq;
    std::set<std::pair<Word, Word>> seen;
    for (auto& x : all)
        if (seen.emplace(x.prefix, x.period).second) uniq.push_back(std::move(x));
    return uniq;
}

} // namespace

PrefDomain::PrefDomain(const TwoWay& t, std::size_t state_cap, std::size_t ext_bound) : t_(&t), ext_bound_(ext_bound) {
    try {
        Buchi tape = domain_nba_tape(t, state_cap);
        if (t.lookahead || !t.endmarker) {
            nfa_ = pref_automaton(tape);
        } else {
            nfa_ = pref_automaton(project_endmarked(tape, t.input));
        }
    } catch (const StateCapExceeded&) {
        nfa_.reset();
    }
}

bool PrefDomain::contains(const Word& w) const {
    if (nfa_) return nfa_->accepts(w);
    const TwoWay& t = *t_;
    for (const auto& y : extensions(t, ext_bound_)) {
        if (!t.lookahead) {
            if (eval_up_2way(t, up_concat(w, y)).defined()) return true;
            continue;
        }
        if (w.empty()) {
            if (eval_up_2way(t, y).defined()) return true;
            continue;
        }
        Word base;
        for (std::size_t i = 1; i < w.size(); ++i) base.push_back(base_of(w[i]));
        UPWord x = up_concat(base, y);
        if (!eval_up_2way(t, x).defined()) continue;
        UPWord ann = good_annotation(*t.lookahead, x);
        if (ann.take(w.size()) == w) return true;
    }
    return false;
}

namespace {

TwoWayAcceptor mismatch_acceptor(const TwoWay& t, const Word& v) {
    TwoWayAcceptor base = acceptor_of(t);
    const int vl = int(v.size());
    const int width = vl + 1;
    TwoWayAcceptor a;
    a.nstates = int(t.size()) * width;
    a.initial = t.initial * width;
    a.letters = base.letters;
    const std::size_t nl = a.letters.size();
    a.to.assign(std::size_t(a.nstates) * nl, -1);
    a.dir.assign(std::size_t(a.nstates) * nl, 0);
    a.produces.assign(std::size_t(a.nstates) * nl, 0);
    a.final.assign(std::size_t(a.nstates), 0);
    a.rank.assign(std::size_t(a.nstates), 0);
    a.base.assign(std::size_t(a.nstates), 0);
    const auto& tape = t.tape().symbols();
    for (std::size_t q = 0; q < t.size(); ++q) {
        for (int k = 0; k <= vl; ++k) {
            int id = int(q) * width + k;
            a.rank[std::size_t(id)] = k;
            a.base[std::size_t(id)] = int(q);
            a.final[std::size_t(id)] = char(k == vl && (t.lookahead || t.is_final(int(q))));
            for (std::size_t l = 0; l < nl; ++l) {
                Symbol letter = a.letters[l];
                int s = t.lookahead ? int(std::find(tape.begin(), tape.end(), base_of(letter)) - tape.begin())
                                    : t.symbol_index(letter);
                int p = t.lookahead ? annotation_of(letter) : 0;
                const Move& mv = t.move(int(q), s, p);
                if (mv.to < 0) continue;
                int nk;
                if (k == vl) {
                    nk = vl;
                } else {
                    int j = k;
                    bool mis = false;
                    for (Symbol o : mv.out) {
                        if (j == vl) break;
                        if (o != v[std::size_t(j)]) {
                            mis = true;
                            break;
                        }
                        ++j;
                    }
                    if (mis) nk = vl;
                    else if (j == vl) continue;
                    else nk = j;
                }
                a.to[std::size_t(id) * nl + l] = mv.to * width + nk;
                a.dir[std::size_t(id) * nl + l] = static_cast<signed char>(mv.dir);
                a.produces[std::size_t(id) * nl + l] = char(!mv.out.empty());
            }
        }
    }
    return a;
}

} // namespace

MismatchOracle::MismatchOracle(const TwoWay& t, Word v, std::size_t state_cap, std::size_t ext_bound)
    : t_(&t), v_(std::move(v)), ext_bound_(ext_bound) {
    if (v_.empty()) return;
    try {
        if (t.size() > state_cap)
            throw StateCapExceeded("machine has " + std::to_string(t.size()) + " states, cap is " +
                                   std::to_string(state_cap));
        auto acc = mismatch_acceptor(t, v_);
        Buchi b = two_way_to_nba(acc);
        if (t.lookahead) b = product(b, annotation_checker(*t.lookahead, acc.letters));
        if (t.endmarker || t.lookahead) b = project_endmarked(b, t.input);
        live_ = live_states(b);
        nba_ = std::move(b);
    } catch (const StateCapExceeded&) {
        nba_.reset();
    }
}

bool MismatchOracle::query(const Word& u) const {
    if (v_.empty()) return false;
    if (nba_) {
        std::vector<int> cur = nba_->initial;
        for (Symbol a : u) {
            std::vector<int> nxt;
            for (int q : cur)
                for (const auto& e : nba_->succ[std::size_t(q)])
                    if (e.symbol == a) nxt.push_back(e.to);
            std::sort(nxt.begin(), nxt.end());
            nxt.erase(std::unique(nxt.begin(), nxt.end()), nxt.end());
            cur = std::move(nxt);
            if (cur.empty()) return false;
        }
        for (int q : cur)
            if (live_[std::size_t(q)]) return true;
        return false;
    }
    for (const auto& y : extensions(*t_, ext_bound_)) {
        auto r = eval_up_2way(*t_, up_concat(u, y));
        if (r.defined() && mismatch(v_, *r.output)) return true;
    }
    return false;
}

bool mismatch_exists(const TwoWay& t, const Word& u, const Word& v, std::size_t state_cap, std::size_t ext_bound) {
    return MismatchOracle(t, v, state_cap, ext_bound).query(u);
}

} // namespace omega
