#include "omega/oneway.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <tuple>

#include "omega/graph.hpp"

namespace omega {

int Nft::add_state(std::string name, bool is_final) {
    names.push_back(std::move(name));
    final.push_back(char(is_final));
    succ.emplace_back();
    return int(names.size()) - 1;
}

void Nft::add_edge(int from, Symbol a, int to, Word out) {
    auto& es = succ[std::size_t(from)];
    for (const auto& e : es)
        if (e.symbol == a && e.to == to && e.out == out) return;
    es.push_back({a, to, std::move(out)});
}

void Nft::set_initial(int q) {
    if (std::find(initial.begin(), initial.end(), q) == initial.end()) initial.push_back(q);
}

int Nft::state(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return int(i);
    return -1;
}

std::size_t Nft::max_output() const {
    std::size_t m = 0;
    for (const auto& es : succ)
        for (const auto& e : es) m = std::max(m, e.out.size());
    return m;
}

Buchi Nft::underlying() const {
    Buchi b;
    b.alphabet = input;
    for (std::size_t q = 0; q < size(); ++q) b.add_state(names[q], final[q]);
    b.initial = initial;
    for (std::size_t q = 0; q < size(); ++q)
        for (const auto& e : succ[q]) b.add_edge(int(q), e.symbol, e.to);
    return b;
}

void Nft::validate() const {
    underlying().validate();
    for (const auto& es : succ)
        for (const auto& e : es)
            if (!output.contains(e.out)) throw InputError("output symbol outside output alphabet");
    if (input.contains(kEndmarker)) throw InputError("the endmarker ^ is reserved");
}

Nft trim(const Nft& t) {
    Buchi b = t.underlying();
    graph::Adjacency adj(t.size());
    for (std::size_t q = 0; q < t.size(); ++q)
        for (const auto& e : t.succ[q]) adj[q].push_back(e.to);
    auto reach = graph::reachable(adj, t.initial);
    auto live = live_states(b);
    std::vector<int> map(t.size(), -1);
    Nft r;
    r.input = t.input;
    r.output = t.output;
    for (std::size_t q = 0; q < t.size(); ++q)
        if (reach[q] && live[q]) map[q] = r.add_state(t.names[q], t.final[q]);
    for (int q : t.initial)
        if (map[std::size_t(q)] >= 0) r.set_initial(map[std::size_t(q)]);
    for (std::size_t q = 0; q < t.size(); ++q) {
        if (map[q] < 0) continue;
        for (const auto& e : t.succ[q])
            if (map[std::size_t(e.to)] >= 0) r.add_edge(map[q], e.symbol, map[std::size_t(e.to)], e.out);
    }
    return r;
}

std::optional<UPWord> eval_up(const Nft& t, const UPWord& x) {
    const std::size_t len = x.classes(), pre = x.prefix.size(), n = t.size();
    auto node = [&](std::size_t q, std::size_t i) { return int(q * len + i); };
    graph::Adjacency adj(n * len);
    std::vector<std::vector<const NftEdge*>> lab(n * len);
    for (std::size_t q = 0; q < n; ++q)
        for (std::size_t i = 0; i < len; ++i) {
            std::size_t nxt = i + 1 < len ? i + 1 : pre;
            for (const auto& e : t.succ[q])
                if (e.symbol == x.at(i)) {
                    adj[std::size_t(node(q, i))].push_back(node(std::size_t(e.to), nxt));
                    lab[std::size_t(node(q, i))].push_back(&e);
                }
        }
    std::vector<int> roots;
    for (int q : t.initial) roots.push_back(node(std::size_t(q), 0));
    if (roots.empty()) return std::nullopt;
    auto sccs = graph::tarjan(adj, roots);

    bool accepting_scc = false;
    for (int c = 0; c < sccs.count; ++c) {
        if (!sccs.nontrivial[std::size_t(c)]) continue;
        int fin = -1, src = -1;
        std::size_t k_edge = 0;
        for (std::size_t v = 0; v < n * len; ++v) {
            if (sccs.comp[v] != c) continue;
            if (t.final[v / len]) fin = int(v);
            for (std::size_t k = 0; k < adj[v].size() && src < 0; ++k)
                if (sccs.comp[std::size_t(adj[v][k])] == c && !lab[v][k]->out.empty()) {
                    src = int(v);
                    k_edge = k;
                }
        }
        if (fin < 0) continue;
        accepting_scc = true;
        if (src < 0) continue;
        auto inside = [&](int v) { return sccs.comp[std::size_t(v)] == c; };
        auto out_of = [&](const std::vector<int>& path) {
            Word o;
            for (std::size_t i = 0; i + 1 < path.size(); ++i) {
                const auto& a = adj[std::size_t(path[i])];
                auto k = std::size_t(std::find(a.begin(), a.end(), path[i + 1]) - a.begin());
                o += lab[std::size_t(path[i])][k]->out;
            }
            return o;
        };
        auto stem = graph::bfs_path(adj, roots, [&](int v) { return v == fin; });
        auto to_src = graph::bfs_path(adj, {fin}, [&](int v) { return v == src; }, inside);
        int tgt = adj[std::size_t(src)][k_edge];
        auto back = graph::bfs_path(adj, {tgt}, [&](int v) { return v == fin; }, inside);
        Word loop_out = out_of(*to_src) + lab[std::size_t(src)][k_edge]->out + out_of(*back);
        return up_normalize(out_of(*stem), loop_out);
    }
    if (accepting_scc) throw EpsilonLoopOutput("accepted input " + format_up(x) + " has finite output");
    return std::nullopt;
}

namespace {

// Output delay between two runs: side 0 balanced, 1 or 2 ahead by `pending`, 3 mismatch.
struct Delay {
    int side = 0;
    Word pending;
};

Delay advance(const Delay& d, const Word& o1, const Word& o2) {
    if (d.side == 3) return d;
    Word s1 = (d.side == 1 ? d.pending : Word()) + o1;
    Word s2 = (d.side == 2 ? d.pending : Word()) + o2;
    std::size_t m = std::min(s1.size(), s2.size());
    for (std::size_t i = 0; i < m; ++i)
        if (s1[i] != s2[i]) return {3, Word()};
    if (s1.size() > m) return {1, s1.substr(m)};
    if (s2.size() > m) return {2, s2.substr(m)};
    return {0, Word()};
}

struct PEdge {
    int to;
    int kind; // 0 both sides read, 1 side 1 alone, 2 side 2 alone, 3 phase switch
    Symbol symbol;
    const NftEdge* e1;
    const NftEdge* e2;
};

struct PNode {
    int phase, q1, q2;
    Delay delay;
};

class DelayProduct {
public:
    std::vector<PNode> nodes;
    std::vector<std::vector<PEdge>> edges;
    std::vector<int> parent;
    std::vector<int> parent_edge;

    int get(int phase, int q1, int q2, const Delay& d, int from, int from_edge, std::deque<int>& todo) {
        auto key = std::make_tuple(phase, q1, q2, d.side, d.pending);
        auto it = ids_.find(key);
        if (it != ids_.end()) return it->second;
        int id = int(nodes.size());
        ids_.emplace(key, id);
        nodes.push_back({phase, q1, q2, d});
        edges.emplace_back();
        parent.push_back(from);
        parent_edge.push_back(from_edge);
        todo.push_back(id);
        return id;
    }

    std::vector<PEdge> path_to(int v) const {
        std::vector<PEdge> p;
        for (; parent[std::size_t(v)] >= 0; v = parent[std::size_t(v)])
            p.push_back(edges[std::size_t(parent[std::size_t(v)])][std::size_t(parent_edge[std::size_t(v)])]);
        std::reverse(p.begin(), p.end());
        return p;
    }

private:
    std::map<std::tuple<int, int, int, int, Word>, int> ids_;
};

// Pairs (q1,q2) sitting on a common loop whose outputs are empty on the sides in `mask`.
struct PairGraph {
    int n;
    graph::Adjacency adj;
    std::vector<std::vector<Symbol>> sym;
    graph::Sccs sccs;
    std::vector<char> loopable;

    PairGraph(const Nft& t, int mask, bool need_final) : n(int(t.size())) {
        adj.resize(std::size_t(n * n));
        sym.resize(std::size_t(n * n));
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q)
                for (const auto& e1 : t.succ[std::size_t(p)])
                    for (const auto& e2 : t.succ[std::size_t(q)]) {
                        if (e1.symbol != e2.symbol) continue;
                        if ((mask & 1) && !e1.out.empty()) continue;
                        if ((mask & 2) && !e2.out.empty()) continue;
                        adj[std::size_t(p * n + q)].push_back(e1.to * n + e2.to);
                        sym[std::size_t(p * n + q)].push_back(e1.symbol);
                    }
        sccs = graph::tarjan(adj);
        std::vector<char> comp_ok(std::size_t(sccs.count), 0);
        for (int v = 0; v < n * n; ++v) {
            int c = sccs.comp[std::size_t(v)];
            if (sccs.nontrivial[std::size_t(c)] && (!need_final || t.is_final(v / n))) comp_ok[std::size_t(c)] = 1;
        }
        loopable.assign(std::size_t(n * n), 0);
        for (int v = 0; v < n * n; ++v) loopable[std::size_t(v)] = comp_ok[std::size_t(sccs.comp[std::size_t(v)])];
    }

    Word loop_at(const Nft& t, int q1, int q2, bool need_final) const {
        int start = q1 * n + q2;
        int c = sccs.comp[std::size_t(start)];
        int via = -1;
        if (need_final && !t.is_final(q1))
            for (int v = 0; v < n * n && via < 0; ++v)
                if (sccs.comp[std::size_t(v)] == c && t.is_final(v / n)) via = v;
        auto cyc = graph::cycle_through(adj, start, via, [&](int v) { return sccs.comp[std::size_t(v)] == c; });
        Word w;
        for (std::size_t i = 0; i + 1 < cyc->size(); ++i) {
            const auto& a = adj[std::size_t((*cyc)[i])];
            auto k = std::size_t(std::find(a.begin(), a.end(), (*cyc)[i + 1]) - a.begin());
            w.push_back(sym[std::size_t((*cyc)[i])][k]);
        }
        return w;
    }
};

UPWord accepted_from(const Nft& t, int q) {
    auto l = lasso_from(t.underlying(), q);
    if (!l) throw std::logic_error("state without accepting continuation in trimmed transducer");
    return l->word();
}

} // namespace

UPWord PatternWitness::first(std::size_t n) const { return up_concat(u + power(v, n) + w, z); }

UPWord PatternWitness::second(std::size_t n) const { return up_concat(u + power(v, n) + w2, z2); }

std::optional<std::size_t> validate_witness(const Nft& t, const PatternWitness& wit, std::size_t n_max) {
    std::vector<std::pair<UPWord, UPWord>> images;
    for (std::size_t n = 1; n <= n_max; ++n) {
        auto a = eval_up(t, wit.first(n));
        auto b = eval_up(t, wit.second(n));
        if (!a || !b) return std::nullopt;
        images.emplace_back(*a, *b);
    }
    if (images.empty()) return std::nullopt;
    std::size_t limit = 64;
    for (const auto& [a, b] : images) limit = std::max(limit, 4 * (a.classes() + b.classes()));
    for (std::size_t i = 0; i < limit; ++i) {
        bool all = true;
        for (const auto& [a, b] : images) all = all && a.at(i) != b.at(i);
        if (all) return i;
    }
    return std::nullopt;
}

ContinuityVerdict check_continuity(const Nft& t0, Variant variant) {
    if (auto ce = functionality_check(t0, 8))
        throw NotFunctional("transducer is not functional: two outputs on " + format_up(ce->x));
    Nft t = trim(t0);
    const bool cont = variant == Variant::Cont;
    const int n = int(t.size());
    std::vector<int> masks = cont ? std::vector<int>{0, 2} : std::vector<int>{0, 1, 2, 3};
    std::vector<std::optional<PairGraph>> pg(4);
    for (int m : masks) pg[std::size_t(m)].emplace(t, m, cont);

    const std::size_t clamp = std::size_t(n) * std::size_t(n) * t.max_output() + 1;
    DelayProduct prod;
    std::deque<int> todo;
    for (int p : t.initial)
        for (int q : t.initial) prod.get(0, p, q, Delay{}, -1, -1, todo);

    int goal = -1;
    while (!todo.empty() && goal < 0) {
        int id = todo.front();
        todo.pop_front();
        PNode nd = prod.nodes[std::size_t(id)];
        if (nd.phase > 0 && nd.delay.side == 3) {
            goal = id;
            break;
        }
        auto push = [&](int phase, int q1, int q2, const Delay& d, PEdge e) {
            if (d.side != 3 && d.pending.size() > clamp) return;
            auto& out = prod.edges[std::size_t(id)];
            out.push_back(e);
            int to = prod.get(phase, q1, q2, d, id, int(out.size()) - 1, todo);
            prod.edges[std::size_t(id)].back().to = to;
        };
        if (nd.phase == 0) {
            for (int m : masks)
                if (pg[std::size_t(m)]->loopable[std::size_t(nd.q1 * n + nd.q2)])
                    push(1 + m, nd.q1, nd.q2, nd.delay, {-1, 3, 0, nullptr, nullptr});
            for (const auto& e1 : t.succ[std::size_t(nd.q1)])
                for (const auto& e2 : t.succ[std::size_t(nd.q2)])
                    if (e1.symbol == e2.symbol)
                        push(0, e1.to, e2.to, advance(nd.delay, e1.out, e2.out), {-1, 0, e1.symbol, &e1, &e2});
            continue;
        }
        int m = nd.phase - 1;
        if (m & 1)
            for (const auto& e1 : t.succ[std::size_t(nd.q1)])
                push(nd.phase, e1.to, nd.q2, advance(nd.delay, e1.out, Word()), {-1, 1, e1.symbol, &e1, nullptr});
        if (m & 2)
            for (const auto& e2 : t.succ[std::size_t(nd.q2)])
                push(nd.phase, nd.q1, e2.to, advance(nd.delay, Word(), e2.out), {-1, 2, e2.symbol, nullptr, &e2});
    }
    ContinuityVerdict verdict;
    if (goal < 0) return verdict;

    PatternWitness w;
    w.kind = variant;
    int lq1 = -1, lq2 = -1, mask = 0;
    auto path = prod.path_to(goal);
    int q1 = -1, q2 = -1;
    {
        // replay to find the loop pair
        int v = goal;
        std::vector<int> chain{v};
        while (prod.parent[std::size_t(v)] >= 0) chain.push_back(v = prod.parent[std::size_t(v)]);
        std::reverse(chain.begin(), chain.end());
        for (std::size_t i = 0; i < path.size(); ++i) {
            if (path[i].kind == 0) w.u.push_back(path[i].symbol);
            if (path[i].kind == 1) w.w2.push_back(path[i].symbol);
            if (path[i].kind == 2) w.w.push_back(path[i].symbol);
            if (path[i].kind == 3) {
                const auto& at = prod.nodes[std::size_t(chain[i])];
                lq1 = at.q1;
                lq2 = at.q2;
                mask = prod.nodes[std::size_t(chain[i + 1])].phase - 1;
            }
        }
        q1 = prod.nodes[std::size_t(goal)].q1;
        q2 = prod.nodes[std::size_t(goal)].q2;
    }
    w.v = pg[std::size_t(mask)]->loop_at(t, lq1, lq2, cont);
    w.z = accepted_from(t, q2);
    if (cont) {
        w.z2 = up_normalize(Word(), w.v);
    } else {
        w.z2 = accepted_from(t, q1);
    }
    auto pos = validate_witness(t, w, 4);
    if (!pos) throw std::logic_error("continuity witness failed re-validation");
    w.position = *pos;
    verdict.continuous = false;
    verdict.witness = w;
    return verdict;
}

bool universal_prefix_consistent(const Nft& t, const Word& u, const Word& w) {
    // k = |w| marks runs whose output already covers w, k = |w|+1 runs that
    // mismatched it. Only runs reading all of u count.
    const std::size_t done = w.size(), bad = done + 1;
    std::set<std::pair<int, std::size_t>> cur;
    for (int q : t.initial) cur.emplace(q, 0);
    for (Symbol a : u) {
        std::set<std::pair<int, std::size_t>> nxt;
        for (auto [q, k] : cur) {
            for (const auto& e : t.succ[std::size_t(q)]) {
                if (e.symbol != a) continue;
                std::size_t j = k;
                for (std::size_t i = 0; i < e.out.size() && j < done; ++i, ++j)
                    if (e.out[i] != w[j]) {
                        j = bad;
                        break;
                    }
                nxt.emplace(e.to, j);
            }
        }
        cur = std::move(nxt);
        if (cur.empty()) return true;
    }
    for (const auto& s : cur)
        if (s.second == bad) return false;
    std::set<std::pair<int, std::size_t>> seen;
    std::vector<std::pair<int, std::size_t>> stack;
    for (const auto& s : cur)
        if (s.second < done && seen.insert(s).second) stack.push_back(s);
    while (!stack.empty()) {
        auto [q, k] = stack.back();
        stack.pop_back();
        for (const auto& e : t.succ[std::size_t(q)]) {
            std::size_t j = k, i = 0;
            for (; i < e.out.size() && j < done; ++i, ++j)
                if (e.out[i] != w[j]) return false;
            if (j < done && seen.emplace(e.to, j).second) stack.emplace_back(e.to, j);
        }
    }
    return true;
}

std::optional<FunctionalityCounterexample> functionality_check(const Nft& t0, std::size_t bound, std::size_t max_nodes) {
    Nft t = trim(t0);
    const std::size_t clamp = bound * t.max_output();
    DelayProduct prod;
    std::deque<int> todo;
    for (int p : t.initial)
        for (int q : t.initial) prod.get(0, p, q, Delay{}, -1, -1, todo);
    while (!todo.empty()) {
        int id = todo.front();
        todo.pop_front();
        if (max_nodes && prod.nodes.size() > max_nodes) throw BudgetExceeded("functionality check exceeded its node budget");
        PNode nd = prod.nodes[std::size_t(id)];
        for (const auto& e1 : t.succ[std::size_t(nd.q1)])
            for (const auto& e2 : t.succ[std::size_t(nd.q2)]) {
                if (e1.symbol != e2.symbol) continue;
                Delay d = advance(nd.delay, e1.out, e2.out);
                if (d.side != 3 && d.pending.size() > clamp) continue;
                auto& out = prod.edges[std::size_t(id)];
                out.push_back({-1, 0, e1.symbol, &e1, &e2});
                int to = prod.get(0, e1.to, e2.to, d, id, int(out.size()) - 1, todo);
                prod.edges[std::size_t(id)].back().to = to;
            }
    }
    const std::size_t total = prod.nodes.size();
    graph::Adjacency adj(total);
    for (std::size_t v = 0; v < total; ++v)
        for (const auto& e : prod.edges[v]) adj[v].push_back(e.to);
    auto sccs = graph::tarjan(adj);
    std::vector<int> fin1(std::size_t(sccs.count), -1), fin2(std::size_t(sccs.count), -1);
    for (std::size_t v = 0; v < total; ++v) {
        int c = sccs.comp[v];
        if (c < 0 || prod.nodes[v].delay.side != 3) continue;
        if (t.is_final(prod.nodes[v].q1)) fin1[std::size_t(c)] = int(v);
        if (t.is_final(prod.nodes[v].q2)) fin2[std::size_t(c)] = int(v);
    }
    for (int c = 0; c < sccs.count; ++c) {
        if (!sccs.nontrivial[std::size_t(c)]) continue;
        int f1 = fin1[std::size_t(c)], f2 = fin2[std::size_t(c)];
        if (f1 < 0 || f2 < 0) continue;
        auto inside = [&](int v) { return sccs.comp[std::size_t(v)] == c; };
        auto cyc = graph::cycle_through(adj, f1, f2 == f1 ? -1 : f2, inside);
        if (!cyc) continue;
        Word stem, loop, o1s, o2s, o1l, o2l;
        for (const auto& e : prod.path_to(f1)) {
            stem.push_back(e.symbol);
            o1s += e.e1->out;
            o2s += e.e2->out;
        }
        for (std::size_t i = 0; i + 1 < cyc->size(); ++i) {
            const auto& es = prod.edges[std::size_t((*cyc)[i])];
            auto it = std::find_if(es.begin(), es.end(), [&](const PEdge& e) { return e.to == (*cyc)[i + 1]; });
            loop.push_back(it->symbol);
            o1l += it->e1->out;
            o2l += it->e2->out;
        }
        if (o1l.empty() || o2l.empty()) continue;
        FunctionalityCounterexample ce{up_normalize(stem, loop), up_normalize(o1s, o1l), up_normalize(o2s, o2l)};
        if (lcp(ce.out1, ce.out2) == kInfinity) continue;
        return ce;
    }
    return std::nullopt;
}

std::optional<std::size_t> longest_run_output(const Nft& t, const Word& u) {
    std::map<int, std::size_t> cur;
    for (int q : t.initial) cur[q] = 0;
    for (Symbol a : u) {
        std::map<int, std::size_t> nxt;
        for (auto [q, len] : cur)
            for (const auto& e : t.succ[std::size_t(q)])
                if (e.symbol == a) {
                    auto& slot = nxt[e.to];
                    slot = std::max(slot, len + e.out.size());
                }
        cur = std::move(nxt);
    }
    if (cur.empty()) return std::nullopt;
    std::size_t best = 0;
    for (auto [q, len] : cur) best = std::max(best, len);
    return best;
}

} // namespace omega
