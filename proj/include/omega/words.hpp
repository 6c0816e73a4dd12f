#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace omega {

using Symbol = char32_t;
using Word = std::u32string;

// Left endmarker, written `^` in files.
inline constexpr Symbol kEndmarker = U'^';
inline constexpr std::size_t kInfinity = std::numeric_limits<std::size_t>::max();

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Symbols over Sigma x Q_P pack the look-ahead state index above bit 16.
inline Symbol annotate(Symbol a, int p) { return Symbol((std::uint32_t(p) + 1) << 16 | std::uint32_t(a)); }
inline Symbol base_of(Symbol s) { return Symbol(std::uint32_t(s) & 0xFFFFu); }
inline int annotation_of(Symbol s) { return int(std::uint32_t(s) >> 16) - 1; }
inline bool is_annotated(Symbol s) { return (std::uint32_t(s) >> 16) != 0; }

class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(std::vector<Symbol> symbols);

    const std::vector<Symbol>& symbols() const { return symbols_; }
    std::size_t size() const { return symbols_.size(); }
    bool empty() const { return symbols_.empty(); }
    bool contains(Symbol s) const;
    bool contains(const Word& w) const;
    // position in the sorted symbol list, or -1
    int index(Symbol s) const;
    Symbol operator[](std::size_t i) const { return symbols_[i]; }

    bool operator==(const Alphabet& o) const { return symbols_ == o.symbols_; }

private:
    std::vector<Symbol> symbols_;
};

struct UPWord {
    Word prefix;
    Word period;

    Symbol at(std::size_t i) const;
    // first n symbols
    Word take(std::size_t n) const;
    std::size_t classes() const { return prefix.size() + period.size(); }

    bool operator==(const UPWord& o) const;
    bool operator!=(const UPWord& o) const { return !(*this == o); }
};

UPWord up_normalize(const Word& prefix, const Word& period);
Symbol up_index(const UPWord& x, std::size_t i);

// Suffix x[i:] as a canonical UP word.
UPWord up_suffix(const UPWord& x, std::size_t i);
// w . x
UPWord up_concat(const Word& w, const UPWord& x);

// Length of the longest common prefix; kInfinity when two UP words are equal.
// With a finite operand the result is capped by that operand's length.
std::size_t lcp(const UPWord& x, const UPWord& y);
std::size_t lcp(const Word& x, const UPWord& y);
std::size_t lcp(const UPWord& x, const Word& y);
std::size_t lcp(const Word& x, const Word& y);

std::optional<std::size_t> mismatch(const UPWord& x, const UPWord& y);
std::optional<std::size_t> mismatch(const Word& x, const UPWord& y);
std::optional<std::size_t> mismatch(const UPWord& x, const Word& y);
std::optional<std::size_t> mismatch(const Word& x, const Word& y);

bool is_prefix(const Word& p, const Word& w);
bool is_prefix(const Word& p, const UPWord& x);

// Symbols past the cutoff cannot distinguish two UP words.
std::size_t fine_wilf_cutoff(const UPWord& x, const UPWord& y);

// Text forms. Finite words: bare symbols, `_` for the empty word.
// UP words: `u(v)`. Annotated symbols print as `(a,p)` given state names.
std::string to_utf8(const Word& w);
Word from_utf8(std::string_view s);
std::string format_word(const Word& w);
std::string format_up(const UPWord& x);
Word parse_word(std::string_view s);
UPWord parse_up(std::string_view s);

std::string format_symbol(Symbol s, const std::vector<std::string>* ann_names = nullptr);
std::string format_annotated(const Word& w, const std::vector<std::string>& ann_names);

Word power(const Word& w, std::size_t n);

struct WordHash {
    std::size_t operator()(const Word& w) const noexcept { return std::hash<Word>{}(w); }
};
struct UPWordHash {
    std::size_t operator()(const UPWord& x) const noexcept {
        std::size_t h = std::hash<Word>{}(x.prefix);
        return h * 1000003u ^ std::hash<Word>{}(x.period);
    }
};

// All words over `alpha` of length in [lo, hi], by length then lexicographically.
std::vector<Word> enumerate_words(const Alphabet& alpha, std::size_t lo, std::size_t hi);

} // namespace omega
