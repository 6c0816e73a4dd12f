#include "omega/loops.hpp"

#include <algorithm>
#include <set>

namespace omega {

namespace {

struct Entries {
    std::vector<char> left, right;
};

Entries entries_of(const TwoWay& t) {
    Entries e{std::vector<char>(t.size(), 0), std::vector<char>(t.size(), 0)};
    for (const auto& r : t.rules) (r.dir > 0 ? e.left : e.right)[std::size_t(r.to)] = 1;
    return e;
}

Exit simulate(const TwoWay& t, const std::vector<int>& tape, int q, std::size_t start) {
    const std::size_t n = tape.size();
    std::vector<char> seen(n * t.size(), 0);
    std::size_t c = start;
    Exit ex;
    while (true) {
        char& mark = seen[c * t.size() + std::size_t(q)];
        if (mark) {
            ex.kind = ExitKind::Trapped;
            return ex;
        }
        mark = 1;
        const Move& mv = t.move(q, tape[c]);
        if (mv.to < 0) {
            ex.kind = ExitKind::Blocked;
            return ex;
        }
        ex.produced = ex.produced || !mv.out.empty();
        q = mv.to;
        if (mv.dir < 0 && c == 0) {
            ex.kind = ExitKind::Left;
            ex.state = q;
            return ex;
        }
        c = mv.dir > 0 ? c + 1 : c - 1;
        if (c == n) {
            ex.kind = ExitKind::Right;
            ex.state = q;
            return ex;
        }
    }
}

} // namespace

bool Behavior::same_state_map(const Behavior& o) const {
    auto eq = [](const std::vector<Exit>& a, const std::vector<Exit>& b) {
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i].kind != b[i].kind || a[i].state != b[i].state) return false;
        return true;
    };
    return eq(from_left, o.from_left) && eq(from_right, o.from_right);
}

bool Behavior::produces() const {
    for (const auto& e : from_left)
        if (e.produced) return true;
    for (const auto& e : from_right)
        if (e.produced) return true;
    return false;
}

Behavior behavior(const TwoWay& t, const Word& w) {
    if (t.lookahead) throw InputError("behavior needs a machine without look-ahead");
    auto ent = entries_of(t);
    std::vector<int> tape;
    for (Symbol s : w) {
        int i = t.symbol_index(s);
        if (i < 0) throw InputError("symbol " + format_symbol(s) + " outside the input alphabet");
        tape.push_back(i);
    }
    Behavior b;
    b.from_left.resize(t.size());
    b.from_right.resize(t.size());
    for (std::size_t q = 0; q < t.size(); ++q) {
        if (ent.left[q]) {
            b.from_left[q] = tape.empty() ? Exit{ExitKind::Right, int(q), false} : simulate(t, tape, int(q), 0);
        }
        if (ent.right[q]) {
            b.from_right[q] = tape.empty() ? Exit{ExitKind::Left, int(q), false}
                                           : simulate(t, tape, int(q), tape.size() - 1);
        }
    }
    return b;
}

Behavior compose(const TwoWay& t, const Behavior& a, const Behavior& b) {
    Behavior r;
    r.from_left.resize(t.size());
    r.from_right.resize(t.size());
    // side 0: entering a from the left, 1: b from the left, 2: a from the right, 3: b from the right
    auto run = [&](int side, int q) {
        Exit out;
        std::set<std::pair<int, int>> seen;
        while (true) {
            if (!seen.emplace(side, q).second) {
                out.kind = ExitKind::Trapped;
                return out;
            }
            const Exit& e = (side == 0)   ? a.from_left[std::size_t(q)]
                            : (side == 1) ? b.from_left[std::size_t(q)]
                            : (side == 2) ? a.from_right[std::size_t(q)]
                                          : b.from_right[std::size_t(q)];
            out.produced = out.produced || e.produced;
            bool in_a = side == 0 || side == 2;
            switch (e.kind) {
            case ExitKind::Unused:
            case ExitKind::Trapped:
            case ExitKind::Blocked:
                out.kind = e.kind == ExitKind::Unused ? ExitKind::Blocked : e.kind;
                return out;
            case ExitKind::Left:
                if (in_a) {
                    out.kind = ExitKind::Left;
                    out.state = e.state;
                    return out;
                }
                side = 2;
                q = e.state;
                break;
            case ExitKind::Right:
                if (!in_a) {
                    out.kind = ExitKind::Right;
                    out.state = e.state;
                    return out;
                }
                side = 1;
                q = e.state;
                break;
            }
        }
    };
    for (std::size_t q = 0; q < t.size(); ++q) {
        if (a.from_left[q].kind != ExitKind::Unused) r.from_left[q] = run(0, int(q));
        if (b.from_right[q].kind != ExitKind::Unused) r.from_right[q] = run(3, int(q));
    }
    return r;
}

bool is_idempotent(const TwoWay& t, const Behavior& b) { return compose(t, b, b).same_state_map(b); }

bool is_idempotent(const TwoWay& t, const Word& u2) { return is_idempotent(t, behavior(t, u2)); }

std::vector<int> crossing_sequence(const FiniteRun& r, std::size_t b) {
    std::vector<int> seq;
    const std::size_t n = r.steps();
    for (std::size_t i = 0; i < n; ++i) {
        const bool last = i + 1 == n;
        if (last && r.exit != FiniteExit::RightEnd) break;
        const std::size_t from = std::size_t(r.cells[i]);
        const std::size_t to = last ? from + 1 : std::size_t(r.cells[i + 1]);
        if ((from < b) != (to < b)) seq.push_back(last ? r.exit_state : r.states[i + 1]);
    }
    return seq;
}

bool is_idempotent(const TwoWay& t, const Word& u1, const Word& u2, const Word& u3) {
    if (!is_idempotent(t, u2)) return false;
    const FiniteRun r = run_finite(t, u1 + u2 + u3);
    const std::size_t lo = (t.endmarker ? 1 : 0) + u1.size();
    return crossing_sequence(r, lo) == crossing_sequence(r, lo + u2.size());
}

std::size_t idempotent_power(const TwoWay& t, const Word& w) {
    Behavior base = behavior(t, w);
    Behavior cur = base;
    for (std::size_t k = 1; k <= 4096; ++k) {
        if (is_idempotent(t, cur)) return k;
        cur = compose(t, cur, base);
    }
    throw std::runtime_error("idempotent_power: no idempotent power found");
}

std::string to_string(TraversalKind k) {
    switch (k) {
    case TraversalKind::LL: return "LL";
    case TraversalKind::LR: return "LR";
    case TraversalKind::RL: return "RL";
    case TraversalKind::RR: return "RR";
    }
    return "?";
}

std::vector<std::size_t> RunDecomposition::anchors() const {
    std::vector<std::size_t> a;
    for (const auto& c : components) a.push_back(c.anchor);
    return a;
}

namespace {

std::vector<Traversal> traversals_of(const FiniteRun& r, std::size_t lo, std::size_t hi) {
    std::vector<Traversal> out;
    const std::size_t n = r.steps();
    auto inside = [&](std::size_t i) { return std::size_t(r.cells[i]) >= lo && std::size_t(r.cells[i]) < hi; };
    for (std::size_t i = 0; i < n;) {
        if (!inside(i)) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < n && inside(j)) ++j;
        bool from_left = i == 0 || std::size_t(r.cells[i - 1]) < lo;
        bool to_right = j == n || std::size_t(r.cells[j]) >= hi;
        TraversalKind k = from_left ? (to_right ? TraversalKind::LR : TraversalKind::LL)
                                    : (to_right ? TraversalKind::RR : TraversalKind::RL);
        std::size_t ob = r.out_before[i];
        std::size_t oe = j == n ? r.output.size() : r.out_before[j];
        int exit_state = j == n ? r.exit_state : r.states[j];
        out.push_back({k, i, j, r.output.substr(ob, oe - ob), r.states[i], exit_state});
        i = j;
    }
    return out;
}

std::vector<std::size_t> anchor_steps(const std::vector<Traversal>& ts) {
    std::vector<std::size_t> a;
    for (const auto& t : ts)
        if (t.kind == TraversalKind::LR || t.kind == TraversalKind::RL) a.push_back(t.start);
    return a;
}

Word slice(const FiniteRun& r, std::size_t from, std::size_t to) {
    std::size_t ob = from >= r.steps() ? r.output.size() : r.out_before[from];
    std::size_t oe = to >= r.steps() ? r.output.size() : r.out_before[to];
    return r.output.substr(ob, oe - ob);
}

} // namespace

RunDecomposition decompose(const TwoWay& t, const Word& u1, const Word& u2, const Word& u3) {
    if (u2.empty()) throw DecomposeError("u2 must be non-empty");
    if (!is_idempotent(t, u2)) throw DecomposeError("u2 is not idempotent");
    FiniteRun r = run_finite(t, u1 + u2 + u3);
    FiniteRun r2 = run_finite(t, u1 + u2 + u2 + u3);
    if (r.exit != FiniteExit::RightEnd || r2.exit != FiniteExit::RightEnd)
        throw DecomposeError("run does not reach the right end of the input");
    const std::size_t lo = (t.endmarker ? 1 : 0) + u1.size();
    const std::size_t hi = lo + u2.size();
    if (crossing_sequence(r, lo) != crossing_sequence(r, hi))
        throw DecomposeError("the run crosses the two ends of u2 differently");

    RunDecomposition d;
    d.output = r.output;
    d.traversals = traversals_of(r, lo, hi);
    for (std::size_t i = 0; i < r.steps(); ++i) {
        std::size_t c = std::size_t(r.cells[i]);
        if (c >= lo && c < hi && r.out_before[i] != (i + 1 < r.steps() ? r.out_before[i + 1] : r.output.size()))
            d.producing = true;
    }
    auto anchors = anchor_steps(d.traversals);
    auto a1 = anchor_steps(traversals_of(r2, lo, hi));
    auto a2 = anchor_steps(traversals_of(r2, hi, hi + u2.size()));
    const std::size_t k = anchors.size();
    if (k % 2 == 0 || a1.size() != k || a2.size() != k)
        throw DecomposeError("anchor points do not line up between the pumped runs");

    std::vector<std::size_t> from(k), to(k);
    for (std::size_t i = 0; i < k; ++i) {
        from[i] = std::min(a1[i], a2[i]);
        to[i] = std::max(a1[i], a2[i]);
        if (i > 0 && from[i] < to[i - 1]) throw DecomposeError("inserted traversals overlap");
    }
    for (std::size_t i = 0; i <= k; ++i) {
        std::size_t b = i == 0 ? 0 : anchors[i - 1];
        std::size_t e = i == k ? r.steps() : anchors[i];
        d.pi.push_back(slice(r, b, e));
        std::size_t b2 = i == 0 ? 0 : to[i - 1];
        std::size_t e2 = i == k ? r2.steps() : from[i];
        if (slice(r2, b2, e2) != d.pi.back()) throw DecomposeError("pumped run does not match the segment layout");
    }
    for (std::size_t i = 0; i < k; ++i) {
        Component c;
        c.anchor = anchors[i];
        c.tr_output = slice(r2, from[i], to[i]);
        std::size_t next = i + 1 < k ? anchors[i + 1] : r.steps();
        for (std::size_t j = 0; j < d.traversals.size(); ++j) {
            const auto& tv = d.traversals[j];
            if (tv.start == anchors[i]) c.kind = tv.kind;
            if (tv.start >= anchors[i] && tv.start < next) c.traversals.push_back(j);
            if (i == 0 && tv.start < anchors[0]) c.traversals.push_back(j);
        }
        std::sort(c.traversals.begin(), c.traversals.end());
        d.components.push_back(std::move(c));
    }
    return d;
}

Word rho(const RunDecomposition& d) {
    Word w;
    for (std::size_t i = 0; i < d.components.size(); ++i) {
        w += d.pi[i];
        if (!d.components[i].tr_output.empty()) return w;
    }
    return d.output;
}

Word rho(const TwoWay& t, const Word& u1, const Word& u2, const Word& u3) { return rho(decompose(t, u1, u2, u3)); }

Word pump_predict(const RunDecomposition& d, std::size_t n) {
    Word w = d.pi[0];
    for (std::size_t i = 0; i < d.components.size(); ++i) {
        w += power(d.components[i].tr_output, n);
        w += d.pi[i + 1];
    }
    return w;
}

} // namespace omega
