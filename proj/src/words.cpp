#include "omega/words.hpp"

#include <algorithm>
#include <numeric>

namespace omega {

Alphabet::Alphabet(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
    std::sort(symbols_.begin(), symbols_.end());
    if (std::adjacent_find(symbols_.begin(), symbols_.end()) != symbols_.end())
        throw InputError("duplicate symbol in alphabet");
}

bool Alphabet::contains(Symbol s) const { return std::binary_search(symbols_.begin(), symbols_.end(), s); }

bool Alphabet::contains(const Word& w) const {
    return std::all_of(w.begin(), w.end(), [&](Symbol s) { return contains(s); });
}

int Alphabet::index(Symbol s) const {
    auto it = std::lower_bound(symbols_.begin(), symbols_.end(), s);
    if (it == symbols_.end() || *it != s) return -1;
    return int(it - symbols_.begin());
}

Symbol UPWord::at(std::size_t i) const {
    if (i < prefix.size()) return prefix[i];
    return period[(i - prefix.size()) % period.size()];
}

Word UPWord::take(std::size_t n) const {
    Word w;
    w.reserve(n);
    for (std::size_t i = 0; i < n; ++i) w.push_back(at(i));
    return w;
}

bool UPWord::operator==(const UPWord& o) const {
    if (prefix == o.prefix && period == o.period) return true;
    return lcp(*this, o) == kInfinity;
}

static std::size_t primitive_root_length(const Word& v) {
    const std::size_t n = v.size();
    for (std::size_t d = 1; d < n; ++d) {
        if (n % d) continue;
        bool ok = true;
        for (std::size_t i = d; i < n && ok; ++i) ok = v[i] == v[i - d];
        if (ok) return d;
    }
    return n;
}

UPWord up_normalize(const Word& prefix, const Word& period) {
    if (period.empty()) throw InputError("empty period");
    UPWord x{prefix, period.substr(0, primitive_root_length(period))};
    while (!x.prefix.empty() && x.prefix.back() == x.period.back()) {
        x.prefix.pop_back();
        std::rotate(x.period.rbegin(), x.period.rbegin() + 1, x.period.rend());
    }
    return x;
}

Symbol up_index(const UPWord& x, std::size_t i) { return x.at(i); }

UPWord up_suffix(const UPWord& x, std::size_t i) {
    if (i < x.prefix.size()) return up_normalize(x.prefix.substr(i), x.period);
    std::size_t r = (i - x.prefix.size()) % x.period.size();
    Word p = x.period.substr(r) + x.period.substr(0, r);
    return up_normalize(Word(), p);
}

UPWord up_concat(const Word& w, const UPWord& x) { return up_normalize(w + x.prefix, x.period); }

std::size_t fine_wilf_cutoff(const UPWord& x, const UPWord& y) {
    std::size_t a = x.period.size(), b = y.period.size();
    return std::max(x.prefix.size(), y.prefix.size()) + a + b + std::lcm(a, b);
}

std::size_t lcp(const UPWord& x, const UPWord& y) {
    std::size_t n = fine_wilf_cutoff(x, y);
    for (std::size_t i = 0; i < n; ++i)
        if (x.at(i) != y.at(i)) return i;
    return kInfinity;
}

std::size_t lcp(const Word& x, const UPWord& y) {
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] != y.at(i)) return i;
    return x.size();
}

std::size_t lcp(const UPWord& x, const Word& y) { return lcp(y, x); }

std::size_t lcp(const Word& x, const Word& y) {
    std::size_t n = std::min(x.size(), y.size());
    for (std::size_t i = 0; i < n; ++i)
        if (x[i] != y[i]) return i;
    return n;
}

std::optional<std::size_t> mismatch(const UPWord& x, const UPWord& y) {
    std::size_t l = lcp(x, y);
    if (l == kInfinity) return std::nullopt;
    return l;
}

std::optional<std::size_t> mismatch(const Word& x, const UPWord& y) {
    std::size_t l = lcp(x, y);
    if (l >= x.size()) return std::nullopt;
    return l;
}

std::optional<std::size_t> mismatch(const UPWord& x, const Word& y) { return mismatch(y, x); }

std::optional<std::size_t> mismatch(const Word& x, const Word& y) {
    std::size_t l = lcp(x, y);
    if (l >= std::min(x.size(), y.size())) return std::nullopt;
    return l;
}

bool is_prefix(const Word& p, const Word& w) { return p.size() <= w.size() && std::equal(p.begin(), p.end(), w.begin()); }

bool is_prefix(const Word& p, const UPWord& x) { return lcp(p, x) == p.size(); }

std::string to_utf8(const Word& w) {
    std::string out;
    for (Symbol c : w) {
        auto u = std::uint32_t(c);
        if (u < 0x80) {
            out.push_back(char(u));
        } else if (u < 0x800) {
            out.push_back(char(0xC0 | (u >> 6)));
            out.push_back(char(0x80 | (u & 0x3F)));
        } else if (u < 0x10000) {
            out.push_back(char(0xE0 | (u >> 12)));
            out.push_back(char(0x80 | ((u >> 6) & 0x3F)));
            out.push_back(char(0x80 | (u & 0x3F)));
        } else {
            out.push_back(char(0xF0 | (u >> 18)));
            out.push_back(char(0x80 | ((u >> 12) & 0x3F)));
            out.push_back(char(0x80 | ((u >> 6) & 0x3F)));
            out.push_back(char(0x80 | (u & 0x3F)));
        }
    }
    return out;
}

Word from_utf8(std::string_view s) {
    Word w;
    for (std::size_t i = 0; i < s.size();) {
        auto c = static_cast<unsigned char>(s[i]);
        std::uint32_t u;
        int extra;
        if (c < 0x80) {
            u = c;
            extra = 0;
        } else if ((c >> 5) == 6) {
            u = c & 0x1F;
            extra = 1;
        } else if ((c >> 4) == 14) {
            u = c & 0x0F;
            extra = 2;
        } else if ((c >> 3) == 30) {
            u = c & 0x07;
            extra = 3;
        } else {
            throw InputError("invalid UTF-8");
        }
        if (extra && i + std::size_t(extra) >= s.size()) throw InputError("truncated UTF-8");
        for (int k = 1; k <= extra; ++k) u = (u << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
        w.push_back(Symbol(u));
        i += std::size_t(extra) + 1;
    }
    return w;
}

std::string format_word(const Word& w) { return w.empty() ? "_" : to_utf8(w); }

std::string format_up(const UPWord& x) { return to_utf8(x.prefix) + "(" + to_utf8(x.period) + ")"; }

Word parse_word(std::string_view s) {
    if (s == "_") return Word();
    Word w = from_utf8(s);
    for (Symbol c : w)
        if (c == U'(' || c == U')' || c == U'_' || c == U' ') throw InputError("bad finite word: " + std::string(s));
    return w;
}

UPWord parse_up(std::string_view s) {
    auto open = s.find('(');
    if (open == std::string_view::npos || s.empty() || s.back() != ')')
        throw InputError("UP word must look like u(v): " + std::string(s));
    auto u = s.substr(0, open);
    auto v = s.substr(open + 1, s.size() - open - 2);
    if (v.empty()) throw InputError("empty period in " + std::string(s));
    Word pu = u.empty() ? Word() : parse_word(u);
    Word pv = parse_word(v);
    return up_normalize(pu, pv);
}

std::string format_symbol(Symbol s, const std::vector<std::string>* ann_names) {
    if (!is_annotated(s)) return to_utf8(Word(1, s));
    int p = annotation_of(s);
    std::string name = ann_names && p < int(ann_names->size()) ? (*ann_names)[std::size_t(p)] : std::to_string(p);
    return "(" + to_utf8(Word(1, base_of(s))) + "," + name + ")";
}

std::string format_annotated(const Word& w, const std::vector<std::string>& ann_names) {
    if (w.empty()) return "_";
    std::string out;
    for (Symbol s : w) out += format_symbol(s, &ann_names);
    return out;
}

Word power(const Word& w, std::size_t n) {
    Word r;
    r.reserve(w.size() * n);
    for (std::size_t i = 0; i < n; ++i) r += w;
    return r;
}

std::vector<Word> enumerate_words(const Alphabet& alpha, std::size_t lo, std::size_t hi) {
    std::vector<Word> out;
    std::vector<Word> layer{Word()};
    for (std::size_t len = 0; len <= hi; ++len) {
        if (len >= lo) out.insert(out.end(), layer.begin(), layer.end());
        if (len == hi) break;
        std::vector<Word> next;
        next.reserve(layer.size() * alpha.size());
        for (const auto& w : layer)
            for (Symbol a : alpha.symbols()) next.push_back(w + a);
        layer = std::move(next);
    }
    return out;
}

} // namespace omega
