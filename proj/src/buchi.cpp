#include "omega/buchi.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "omega/graph.hpp"

namespace omega {

int Buchi::add_state(std::string name, bool is_final) {
    names.push_back(std::move(name));
    final.push_back(char(is_final));
    succ.emplace_back();
    return int(names.size()) - 1;
}

void Buchi::add_edge(int from, Symbol a, int to) {
    auto& out = succ[std::size_t(from)];
    for (const auto& e : out)
        if (e.symbol == a && e.to == to) return;
    out.push_back({a, to});
}

void Buchi::set_initial(int q) {
    if (std::find(initial.begin(), initial.end(), q) == initial.end()) initial.push_back(q);
}

int Buchi::state(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return int(i);
    return -1;
}

void Buchi::validate() const {
    const int n = int(size());
    if (final.size() != names.size() || succ.size() != names.size()) throw InputError("inconsistent automaton tables");
    std::set<std::string> seen(names.begin(), names.end());
    if (seen.size() != names.size()) throw InputError("duplicate state name");
    for (int q : initial)
        if (q < 0 || q >= n) throw InputError("initial state out of range");
    for (const auto& out : succ)
        for (const auto& e : out) {
            if (e.to < 0 || e.to >= n) throw InputError("transition target out of range");
            if (!alphabet.contains(e.symbol)) throw InputError("transition symbol outside alphabet");
        }
}

namespace {

graph::Adjacency adjacency(const Buchi& b) {
    graph::Adjacency adj(b.size());
    for (std::size_t q = 0; q < b.size(); ++q)
        for (const auto& e : b.succ[q]) adj[q].push_back(e.to);
    return adj;
}

Symbol edge_symbol(const Buchi& b, int from, int to) {
    for (const auto& e : b.succ[std::size_t(from)])
        if (e.to == to) return e.symbol;
    throw std::logic_error("edge_symbol: no edge");
}

Word path_word(const Buchi& b, const std::vector<int>& path) {
    Word w;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) w.push_back(edge_symbol(b, path[i], path[i + 1]));
    return w;
}

std::optional<Lasso> lasso_from_roots(const Buchi& b, const std::vector<int>& roots) {
    if (roots.empty()) return std::nullopt;
    auto adj = adjacency(b);
    auto sccs = graph::tarjan(adj, roots);
    int target = -1;
    for (std::size_t q = 0; q < b.size() && target < 0; ++q) {
        int c = sccs.comp[q];
        if (c >= 0 && sccs.nontrivial[std::size_t(c)] && b.final[q]) target = int(q);
    }
    if (target < 0) return std::nullopt;
    auto stem = graph::bfs_path(adj, roots, [&](int x) { return x == target; });
    int comp = sccs.comp[std::size_t(target)];
    auto loop = graph::cycle_through(adj, target, -1, [&](int x) { return sccs.comp[std::size_t(x)] == comp; });
    Lasso l;
    l.stem_run = *stem;
    l.loop_run = *loop;
    l.stem = path_word(b, l.stem_run);
    l.loop = path_word(b, l.loop_run);
    return l;
}

graph::Adjacency position_product(const Buchi& b, const UPWord& x) {
    const std::size_t len = x.classes(), pre = x.prefix.size();
    graph::Adjacency adj(b.size() * len);
    for (std::size_t q = 0; q < b.size(); ++q)
        for (std::size_t i = 0; i < len; ++i) {
            std::size_t nxt = i + 1 < len ? i + 1 : pre;
            Symbol a = x.at(i);
            for (const auto& e : b.succ[q])
                if (e.symbol == a) adj[q * len + i].push_back(int(std::size_t(e.to) * len + nxt));
        }
    return adj;
}

} // namespace

bool member_up(const Buchi& b, const UPWord& x, std::optional<int> from) {
    const std::size_t len = x.classes();
    auto adj = position_product(b, x);
    std::vector<int> roots;
    if (from) {
        roots.push_back(int(std::size_t(*from) * len));
    } else {
        for (int q : b.initial) roots.push_back(int(std::size_t(q) * len));
    }
    if (roots.empty()) return false;
    auto sccs = graph::tarjan(adj, roots);
    for (std::size_t v = 0; v < adj.size(); ++v) {
        if (!b.final[v / len]) continue;
        int c = sccs.comp[v];
        if (c >= 0 && sccs.nontrivial[std::size_t(c)]) return true;
    }
    return false;
}

std::vector<char> suffix_acceptance(const Buchi& b, const UPWord& x) {
    const std::size_t len = x.classes();
    auto adj = position_product(b, x);
    auto sccs = graph::tarjan(adj);
    std::vector<char> good(adj.size(), 0);
    for (std::size_t v = 0; v < adj.size(); ++v)
        good[v] = char(b.final[v / len] && sccs.nontrivial[std::size_t(sccs.comp[v])]);
    return graph::coreachable(adj, good);
}

std::vector<int> accepting_starts(const Buchi& b, const UPWord& x) {
    auto acc = suffix_acceptance(b, x);
    std::vector<int> out;
    for (std::size_t q = 0; q < b.size(); ++q)
        if (acc[q * x.classes()]) out.push_back(int(q));
    return out;
}

std::optional<Lasso> is_empty(const Buchi& b) { return lasso_from_roots(b, b.initial); }

std::optional<Lasso> lasso_from(const Buchi& b, int q) { return lasso_from_roots(b, {q}); }

std::vector<char> live_states(const Buchi& b) {
    auto adj = adjacency(b);
    auto sccs = graph::tarjan(adj);
    std::vector<char> good(b.size(), 0);
    for (std::size_t q = 0; q < b.size(); ++q)
        good[q] = char(b.final[q] && sccs.nontrivial[std::size_t(sccs.comp[q])]);
    return graph::coreachable(adj, good);
}

Buchi trim(const Buchi& b) {
    auto adj = adjacency(b);
    auto reach = graph::reachable(adj, b.initial);
    auto live = live_states(b);
    std::vector<int> map(b.size(), -1);
    Buchi r;
    r.alphabet = b.alphabet;
    for (std::size_t q = 0; q < b.size(); ++q)
        if (reach[q] && live[q]) map[q] = r.add_state(b.names[q], b.final[q]);
    for (int q : b.initial)
        if (map[std::size_t(q)] >= 0) r.set_initial(map[std::size_t(q)]);
    for (std::size_t q = 0; q < b.size(); ++q) {
        if (map[q] < 0) continue;
        for (const auto& e : b.succ[q])
            if (map[std::size_t(e.to)] >= 0) r.add_edge(map[q], e.symbol, map[std::size_t(e.to)]);
    }
    return r;
}

Buchi product(const Buchi& a, const Buchi& b) {
    if (!(a.alphabet == b.alphabet)) throw InputError("product: alphabet mismatch");
    Buchi r;
    r.alphabet = a.alphabet;
    std::map<std::tuple<int, int, int>, int> ids;
    std::vector<std::tuple<int, int, int>> todo;
    auto get = [&](int p, int q, int i) {
        auto key = std::make_tuple(p, q, i);
        auto it = ids.find(key);
        if (it != ids.end()) return it->second;
        bool fin = i == 0 && a.is_final(p);
        int id = r.add_state(a.names[std::size_t(p)] + "|" + b.names[std::size_t(q)] + "|" + std::to_string(i), fin);
        ids.emplace(key, id);
        todo.push_back(key);
        return id;
    };
    for (int p : a.initial)
        for (int q : b.initial) r.set_initial(get(p, q, 0));
    while (!todo.empty()) {
        auto [p, q, i] = todo.back();
        todo.pop_back();
        int from = ids.at({p, q, i});
        int j = i;
        if (i == 0 && a.is_final(p)) j = 1;
        else if (i == 1 && b.is_final(q)) j = 0;
        for (const auto& e1 : a.succ[std::size_t(p)])
            for (const auto& e2 : b.succ[std::size_t(q)])
                if (e1.symbol == e2.symbol) r.add_edge(from, e1.symbol, get(e1.to, e2.to, j));
    }
    return r;
}

Buchi closure(const Buchi& b) {
    Buchi t = trim(b);
    Buchi r;
    r.alphabet = b.alphabet;
    if (t.initial.empty()) return r;
    std::map<std::vector<int>, int> ids;
    std::vector<std::vector<int>> todo;
    auto name_of = [&](const std::vector<int>& s) {
        std::string n = "{";
        for (std::size_t i = 0; i < s.size(); ++i) n += (i ? "," : "") + t.names[std::size_t(s[i])];
        return n + "}";
    };
    auto get = [&](std::vector<int> s) {
        auto it = ids.find(s);
        if (it != ids.end()) return it->second;
        int id = r.add_state(name_of(s), true);
        ids.emplace(s, id);
        todo.push_back(std::move(s));
        return id;
    };
    std::vector<int> init = t.initial;
    std::sort(init.begin(), init.end());
    r.set_initial(get(init));
    while (!todo.empty()) {
        auto s = todo.back();
        todo.pop_back();
        int from = ids.at(s);
        for (Symbol a : t.alphabet.symbols()) {
            std::vector<int> nxt;
            for (int q : s)
                for (const auto& e : t.succ[std::size_t(q)])
                    if (e.symbol == a) nxt.push_back(e.to);
            std::sort(nxt.begin(), nxt.end());
            nxt.erase(std::unique(nxt.begin(), nxt.end()), nxt.end());
            if (!nxt.empty()) r.add_edge(from, a, get(std::move(nxt)));
        }
    }
    return r;
}

std::vector<int> Nfa::step(const std::vector<int>& set, Symbol a) const {
    std::vector<int> out;
    for (int q : set)
        for (const auto& e : succ[std::size_t(q)])
            if (e.symbol == a) out.push_back(e.to);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<int> Nfa::run(const Word& w) const {
    std::vector<int> cur = initial;
    std::sort(cur.begin(), cur.end());
    for (Symbol a : w) {
        if (cur.empty()) break;
        cur = step(cur, a);
    }
    return cur;
}

bool Nfa::accepts(const Word& w) const {
    for (int q : run(w))
        if (accepting[std::size_t(q)]) return true;
    return false;
}

Nfa pref_automaton(const Buchi& b) {
    Buchi t = trim(b);
    Nfa n;
    n.alphabet = t.alphabet;
    n.initial = t.initial;
    n.accepting.assign(t.size(), 1);
    n.succ = t.succ;
    return n;
}

std::vector<UPWord> sample_up_words(const Alphabet& alpha, std::size_t max_prefix, std::size_t max_period) {
    std::vector<UPWord> out;
    std::set<std::pair<Word, Word>> seen;
    auto prefixes = enumerate_words(alpha, 0, max_prefix);
    auto periods = enumerate_words(alpha, 1, max_period);
    for (const auto& v : periods)
        for (const auto& u : prefixes) {
            UPWord x = up_normalize(u, v);
            if (seen.emplace(x.prefix, x.period).second) out.push_back(std::move(x));
        }
    return out;
}

namespace {

// Two final runs on one word that differ somewhere.
std::optional<UPWord> ambiguity_witness(const Buchi& b) {
    const int n = int(b.size());
    auto id = [&](int p, int q, int d) { return (p * n + q) * 2 + d; };
    const int total = n * n * 2;
    graph::Adjacency adj(static_cast<std::size_t>(total));
    std::vector<std::vector<Symbol>> sym(static_cast<std::size_t>(total));
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            for (int d = 0; d < 2; ++d)
                for (const auto& e1 : b.succ[std::size_t(p)])
                    for (const auto& e2 : b.succ[std::size_t(q)]) {
                        if (e1.symbol != e2.symbol) continue;
                        int nd = d | int(e1.to != e2.to);
                        adj[std::size_t(id(p, q, d))].push_back(id(e1.to, e2.to, nd));
                        sym[std::size_t(id(p, q, d))].push_back(e1.symbol);
                    }
    auto sccs = graph::tarjan(adj);
    for (int c = 0; c < sccs.count; ++c) {
        if (!sccs.nontrivial[std::size_t(c)]) continue;
        int f1 = -1, f2 = -1, any = -1;
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) {
                int v = id(p, q, 1);
                if (sccs.comp[std::size_t(v)] != c) continue;
                any = v;
                if (b.is_final(p)) f1 = v;
                if (b.is_final(q)) f2 = v;
            }
        if (any < 0 || f1 < 0 || f2 < 0) continue;
        std::vector<int> roots;
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) roots.push_back(id(p, q, int(p != q)));
        auto stem = graph::bfs_path(adj, roots, [&](int x) { return x == f1; });
        if (!stem) continue;
        auto inside = [&](int x) { return sccs.comp[std::size_t(x)] == c; };
        auto loop = graph::cycle_through(adj, f1, f2, inside);
        if (!loop) continue;
        auto word_of = [&](const std::vector<int>& path) {
            Word w;
            for (std::size_t i = 0; i + 1 < path.size(); ++i) {
                const auto& out = adj[std::size_t(path[i])];
                for (std::size_t k = 0; k < out.size(); ++k)
                    if (out[k] == path[i + 1]) {
                        w.push_back(sym[std::size_t(path[i])][k]);
                        break;
                    }
            }
            return w;
        };
        return up_normalize(word_of(*stem), word_of(*loop));
    }
    return std::nullopt;
}

} // namespace

PropheticReport prophetic_check(const Buchi& b, std::size_t bound) {
    PropheticReport r;
    r.bound = bound;
    if (auto w = ambiguity_witness(b)) {
        r.kind = PropheticKind::NotCodeterministic;
        r.witness = *w;
        return r;
    }
    r.codeterministic = true;
    std::vector<Symbol> plain;
    for (Symbol a : b.alphabet.symbols())
        if (a != kEndmarker) plain.push_back(a);
    bool marked = b.alphabet.contains(kEndmarker);
    auto samples = plain.empty() ? std::vector<UPWord>{} : sample_up_words(Alphabet(plain), bound, bound);
    for (const auto& x : samples) {
        std::vector<UPWord> forms{x};
        if (marked) forms.push_back(up_concat(Word(1, kEndmarker), x));
        for (const auto& y : forms)
            if (accepting_starts(b, y).empty()) {
                r.kind = PropheticKind::NotCocompleteUpTo;
                r.witness = y;
                return r;
            }
    }
    r.kind = PropheticKind::CocompleteUpTo;
    return r;
}

} // namespace omega
