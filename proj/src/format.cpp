#include "omega/format.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <tuple>

namespace omega {

ParseError::ParseError(std::size_t line, const std::string& msg)
    : std::runtime_error("line " + std::to_string(line) + ": " + msg), line(line) {}

std::string to_string(MachineKind k) {
    switch (k) {
    case MachineKind::Buchi: return "buchi";
    case MachineKind::Nft: return "nft";
    case MachineKind::TwoWayBasic: return "2dbt";
    case MachineKind::TwoWayLookahead: return "2dft-pla";
    }
    return "?";
}

namespace {

struct Token {
    std::string text;
    bool quoted = false;
};

struct Line {
    std::size_t number;
    std::string key;
    std::vector<Token> args;
};

std::vector<Token> tokenize(std::string_view s, std::size_t line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] == ' ' || s[i] == '\t') {
            ++i;
            continue;
        }
        if (s[i] == '"') {
            std::size_t j = s.find('"', i + 1);
            if (j == std::string_view::npos) throw ParseError(line, "unterminated string");
            out.push_back({std::string(s.substr(i + 1, j - i - 1)), true});
            i = j + 1;
            continue;
        }
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '"') ++j;
        out.push_back({std::string(s.substr(i, j - i)), false});
        i = j;
    }
    return out;
}

std::vector<Line> split_lines(std::string_view text) {
    std::vector<Line> lines;
    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++number;
        // `#` is also an input symbol, so only whole lines are comments
        std::size_t first = raw.find_first_not_of(" \t");
        if (first != std::string_view::npos && raw[first] == '#') continue;
        while (!raw.empty() && (raw.back() == ' ' || raw.back() == '\t' || raw.back() == '\r')) raw.remove_suffix(1);
        std::size_t start = raw.find_first_not_of(" \t");
        if (start == std::string_view::npos) continue;
        raw = raw.substr(start);
        if (raw == "end") {
            lines.push_back({number, "end", {}});
            continue;
        }
        std::size_t colon = raw.find(':');
        if (colon == std::string_view::npos) throw ParseError(number, "expected `key: values`");
        Line l{number, std::string(raw.substr(0, colon)), tokenize(raw.substr(colon + 1), number)};
        lines.push_back(std::move(l));
    }
    return lines;
}

Symbol symbol_of(const Token& t, std::size_t line) {
    if (t.quoted) throw ParseError(line, "symbol expected, got a quoted string");
    Word w = from_utf8(t.text);
    if (w.size() != 1) throw ParseError(line, "symbols are single characters: `" + t.text + "`");
    return w[0];
}

std::vector<Symbol> symbols_of(const Line& l) {
    std::vector<Symbol> out;
    for (const auto& t : l.args) out.push_back(symbol_of(t, l.number));
    std::sort(out.begin(), out.end());
    if (std::adjacent_find(out.begin(), out.end()) != out.end()) throw ParseError(l.number, "repeated symbol");
    return out;
}

std::vector<std::string> names_of(const Line& l) {
    std::vector<std::string> out;
    for (const auto& t : l.args) {
        if (t.quoted) throw ParseError(l.number, "state names are not quoted");
        out.push_back(t.text);
    }
    return out;
}

int dir_of(const Token& t, std::size_t line) {
    if (t.quoted) throw ParseError(line, "direction expected");
    if (t.text == "+1" || t.text == "1") return 1;
    if (t.text == "-1") return -1;
    throw ParseError(line, "direction must be +1 or -1");
}

Word output_of(const Token& t, std::size_t line) {
    if (!t.quoted) throw ParseError(line, "output must be a quoted string");
    return from_utf8(t.text);
}

// Directives shared by every machine kind.
struct Header {
    std::map<std::string, const Line*> once;
    std::vector<const Line*> trans;
};

Header collect(const std::vector<Line>& lines, std::size_t from, std::size_t to, const std::set<std::string>& allowed) {
    Header h;
    for (std::size_t i = from; i < to; ++i) {
        const Line& l = lines[i];
        if (!allowed.count(l.key)) throw ParseError(l.number, "unknown directive `" + l.key + "`");
        if (l.key == "trans") {
            h.trans.push_back(&l);
            continue;
        }
        if (h.once.count(l.key)) throw ParseError(l.number, "repeated directive `" + l.key + "`");
        h.once[l.key] = &l;
    }
    return h;
}

const Line& need(const Header& h, const std::string& key, std::size_t line) {
    auto it = h.once.find(key);
    if (it == h.once.end()) throw ParseError(line, "missing directive `" + key + "`");
    return *it->second;
}

template <class M>
int lookup(const M& m, const std::string& name, std::size_t line) {
    int q = m.state(name);
    if (q < 0) throw ParseError(line, "undeclared state `" + name + "`");
    return q;
}

template <class M>
void declare_states(M& m, const Header& h, std::size_t line) {
    auto names = names_of(need(h, "states", line));
    std::set<std::string> fin;
    if (h.once.count("final")) {
        for (const auto& n : names_of(*h.once.at("final"))) fin.insert(n);
    }
    std::set<std::string> seen;
    for (const auto& n : names) {
        if (!seen.insert(n).second) throw ParseError(h.once.at("states")->number, "repeated state `" + n + "`");
        m.add_state(n, fin.count(n) > 0);
    }
    for (const auto& n : fin)
        if (!seen.count(n)) throw ParseError(h.once.at("final")->number, "undeclared state `" + n + "`");
}

Buchi parse_buchi(const std::vector<Line>& lines, std::size_t from, std::size_t to, std::size_t line) {
    Header h = collect(lines, from, to, {"type", "alphabet", "states", "initial", "final", "trans"});
    Buchi b;
    b.alphabet = Alphabet(symbols_of(need(h, "alphabet", line)));
    declare_states(b, h, line);
    b.succ.resize(b.size());
    const Line& init = need(h, "initial", line);
    for (const auto& n : names_of(init)) b.set_initial(lookup(b, n, init.number));
    for (const Line* l : h.trans) {
        if (l->args.size() != 3) throw ParseError(l->number, "buchi transitions are `q a q'`");
        int q = lookup(b, l->args[0].text, l->number);
        Symbol a = symbol_of(l->args[1], l->number);
        int q2 = lookup(b, l->args[2].text, l->number);
        if (!b.alphabet.contains(a)) throw ValidationError("line " + std::to_string(l->number) + ": symbol outside alphabet");
        b.add_edge(q, a, q2);
    }
    try {
        b.validate();
    } catch (const InputError& e) {
        throw ValidationError(e.what());
    }
    return b;
}

Nft parse_nft(const std::vector<Line>& lines, std::size_t line) {
    Header h = collect(lines, 0, lines.size(), {"type", "input", "output", "states", "initial", "final", "trans"});
    Nft t;
    t.input = Alphabet(symbols_of(need(h, "input", line)));
    t.output = Alphabet(symbols_of(need(h, "output", line)));
    declare_states(t, h, line);
    t.succ.resize(t.size());
    const Line& init = need(h, "initial", line);
    for (const auto& n : names_of(init)) t.set_initial(lookup(t, n, init.number));
    for (const Line* l : h.trans) {
        if (l->args.size() != 4) throw ParseError(l->number, "nft transitions are `q a q' \"out\"`");
        int q = lookup(t, l->args[0].text, l->number);
        Symbol a = symbol_of(l->args[1], l->number);
        int q2 = lookup(t, l->args[2].text, l->number);
        t.add_edge(q, a, q2, output_of(l->args[3], l->number));
    }
    try {
        t.validate();
    } catch (const InputError& e) {
        throw ValidationError(e.what());
    }
    return t;
}

TwoWay parse_twoway(const std::vector<Line>& lines, bool with_la, std::size_t line) {
    std::size_t la_begin = lines.size(), la_end = lines.size();
    std::vector<Line> outer;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].key == "lookahead") {
            if (!with_la) throw ParseError(lines[i].number, "look-ahead block in a 2dbt file");
            if (la_begin != lines.size()) throw ParseError(lines[i].number, "repeated look-ahead block");
            if (!lines[i].args.empty()) throw ParseError(lines[i].number, "`lookahead:` takes no values");
            la_begin = i + 1;
            std::size_t j = la_begin;
            while (j < lines.size() && lines[j].key != "end") ++j;
            if (j == lines.size()) throw ParseError(lines[i].number, "look-ahead block without `end`");
            la_end = j;
            i = j;
            continue;
        }
        if (lines[i].key == "end") throw ParseError(lines[i].number, "stray `end`");
        outer.push_back(lines[i]);
    }
    TwoWay t;
    std::set<std::string> allowed = {"type", "input", "output", "states", "initial", "trans"};
    if (!with_la) allowed.insert("final");
    Header h = collect(outer, 0, outer.size(), allowed);
    t.input = Alphabet(symbols_of(need(h, "input", line)));
    t.output = Alphabet(symbols_of(need(h, "output", line)));
    declare_states(t, h, line);
    const Line& init = need(h, "initial", line);
    auto inits = names_of(init);
    if (inits.size() != 1) throw ParseError(init.number, "two-way machines have exactly one initial state");
    t.initial = lookup(t, inits[0], init.number);
    if (with_la) {
        if (la_begin == lines.size()) throw ParseError(line, "2dft-pla file without a look-ahead block");
        t.lookahead = parse_buchi(lines, la_begin, la_end, lines[la_begin - 1].number);
        t.annotation_names = t.lookahead->names;
    }
    for (const Line* l : h.trans) {
        const std::size_t want = with_la ? 6 : 5;
        if (l->args.size() != want)
            throw ParseError(l->number, with_la ? "transitions are `q a p q' \"out\" dir`" : "transitions are `q a q' \"out\" dir`");
        int q = lookup(t, l->args[0].text, l->number);
        Symbol a = symbol_of(l->args[1], l->number);
        std::size_t k = 2;
        std::vector<int> las{-1};
        if (with_la) {
            const Token& p = l->args[k++];
            if (p.text == "*" && !p.quoted) {
                las.clear();
                for (std::size_t i = 0; i < t.lookahead->size(); ++i) las.push_back(int(i));
            } else {
                las = {lookup(*t.lookahead, p.text, l->number)};
            }
        }
        int q2 = lookup(t, l->args[k].text, l->number);
        Word out = output_of(l->args[k + 1], l->number);
        int dir = dir_of(l->args[k + 2], l->number);
        for (int p : las) t.add_rule(q, a, p, q2, out, dir);
    }
    try {
        t.finalize();
    } catch (const InputError& e) {
        throw ValidationError(e.what());
    }
    return t;
}

std::string sym(Symbol s) { return to_utf8(Word(1, s)); }

std::string join(const std::vector<std::string>& xs) {
    std::string out;
    for (const auto& x : xs) out += " " + x;
    return out;
}

std::vector<std::string> sorted_names(const std::vector<std::string>& names, const std::vector<char>* pick = nullptr) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < names.size(); ++i)
        if (!pick || (*pick)[i]) out.push_back(names[i]);
    std::sort(out.begin(), out.end());
    return out;
}

std::string alphabet_line(const std::string& key, const Alphabet& a) {
    std::string s = key + ":";
    for (Symbol x : a.symbols()) s += " " + sym(x);
    return s + "\n";
}

std::string quoted(const Word& w) { return "\"" + to_utf8(w) + "\""; }

std::string buchi_body(const Buchi& b) {
    std::ostringstream os;
    os << alphabet_line("alphabet", b.alphabet);
    os << "states:" << join(sorted_names(b.names)) << "\n";
    std::vector<std::string> init;
    for (int q : b.initial) init.push_back(b.names[std::size_t(q)]);
    std::sort(init.begin(), init.end());
    os << "initial:" << join(init) << "\n";
    os << "final:" << join(sorted_names(b.names, &b.final)) << "\n";
    std::set<std::tuple<std::string, Symbol, std::string>> edges;
    for (std::size_t q = 0; q < b.size(); ++q)
        for (const auto& e : b.succ[q]) edges.emplace(b.names[q], e.symbol, b.names[std::size_t(e.to)]);
    for (const auto& [q, a, q2] : edges) os << "trans: " << q << " " << sym(a) << " " << q2 << "\n";
    return os.str();
}

} // namespace

MachineFile parse_machine(std::string_view text) {
    auto lines = split_lines(text);
    if (lines.empty() || lines[0].key != "type")
        throw ParseError(lines.empty() ? 1 : lines[0].number, "file must start with `type:`");
    const Line& type = lines[0];
    if (type.args.size() != 1) throw ParseError(type.number, "`type:` takes one value");
    const std::string& kind = type.args[0].text;
    MachineFile m;
    if (kind == "buchi") {
        for (const auto& l : lines)
            if (l.key == "end" || l.key == "lookahead") throw ParseError(l.number, "unknown directive `" + l.key + "`");
        m.kind = MachineKind::Buchi;
        m.machine = parse_buchi(lines, 0, lines.size(), type.number);
    } else if (kind == "nft") {
        m.kind = MachineKind::Nft;
        m.machine = parse_nft(lines, type.number);
    } else if (kind == "2dbt") {
        m.kind = MachineKind::TwoWayBasic;
        m.machine = parse_twoway(lines, false, type.number);
    } else if (kind == "2dft-pla") {
        m.kind = MachineKind::TwoWayLookahead;
        m.machine = parse_twoway(lines, true, type.number);
    } else {
        throw ParseError(type.number, "unknown machine type `" + kind + "`");
    }
    return m;
}

MachineFile load_machine(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_machine(ss.str());
}

std::string serialize(const Buchi& b) { return "type: buchi\n" + buchi_body(b); }

std::string serialize(const Nft& t) {
    std::ostringstream os;
    os << "type: nft\n";
    os << alphabet_line("input", t.input) << alphabet_line("output", t.output);
    os << "states:" << join(sorted_names(t.names)) << "\n";
    std::vector<std::string> init;
    for (int q : t.initial) init.push_back(t.names[std::size_t(q)]);
    std::sort(init.begin(), init.end());
    os << "initial:" << join(init) << "\n";
    os << "final:" << join(sorted_names(t.names, &t.final)) << "\n";
    std::set<std::tuple<std::string, Symbol, std::string, Word>> edges;
    for (std::size_t q = 0; q < t.size(); ++q)
        for (const auto& e : t.succ[q]) edges.emplace(t.names[q], e.symbol, t.names[std::size_t(e.to)], e.out);
    for (const auto& [q, a, q2, out] : edges) os << "trans: " << q << " " << sym(a) << " " << q2 << " " << quoted(out) << "\n";
    return os.str();
}

std::string serialize(const TwoWay& t) {
    const bool la = t.lookahead.has_value();
    std::ostringstream os;
    os << "type: " << (la ? "2dft-pla" : "2dbt") << "\n";
    os << alphabet_line("input", t.input) << alphabet_line("output", t.output);
    os << "states:" << join(sorted_names(t.names)) << "\n";
    os << "initial: " << t.names[std::size_t(t.initial)] << "\n";
    if (!la) os << "final:" << join(sorted_names(t.names, &t.final)) << "\n";
    if (la) {
        std::string body = buchi_body(*t.lookahead);
        os << "lookahead:\n";
        std::istringstream lines(body);
        std::string l;
        while (std::getline(lines, l)) os << "  " << l << "\n";
        os << "end\n";
    }
    // rules keyed without the look-ahead state; full groups collapse to `*`
    using Key = std::tuple<std::string, Symbol, std::string, Word, int>;
    std::map<Key, std::set<std::string>> groups;
    for (const auto& r : t.rules) {
        Key k{t.names[std::size_t(r.from)], r.symbol, t.names[std::size_t(r.to)], r.out, r.dir};
        groups[k].insert(r.la >= 0 ? t.lookahead->names[std::size_t(r.la)] : "");
    }
    std::set<std::tuple<std::string, Symbol, std::string, std::string, Word, int>> lines;
    for (const auto& [k, ps] : groups) {
        const auto& [q, a, q2, out, dir] = k;
        if (la && ps.size() == t.lookahead->size() && t.lookahead->size() > 1) {
            lines.emplace(q, a, "*", q2, out, dir);
        } else {
            for (const auto& p : ps) lines.emplace(q, a, p, q2, out, dir);
        }
    }
    for (const auto& [q, a, p, q2, out, dir] : lines) {
        os << "trans: " << q << " " << sym(a) << " ";
        if (la) os << p << " ";
        os << q2 << " " << quoted(out) << " " << (dir > 0 ? "+1" : "-1") << "\n";
    }
    return os.str();
}

std::string serialize(const MachineFile& m) {
    return std::visit([](const auto& x) { return serialize(x); }, m.machine);
}

bool same_machine(const MachineFile& a, const MachineFile& b) {
    // serialization is canonical: names, symbols and transitions are emitted sorted
    return a.kind == b.kind && serialize(a) == serialize(b);
}

} // namespace omega
