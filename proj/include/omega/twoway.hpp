#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "omega/buchi.hpp"
#include "omega/words.hpp"

namespace omega {

struct Move {
    int to = -1; // -1: undefined
    Word out;
    int dir = 0;
};

struct TwoWayRule {
    int from;
    Symbol symbol;
    int la; // look-ahead state, -1 without look-ahead
    int to;
    Word out;
    int dir;
};

// Deterministic two-way transducer. With `endmarker` set the tape is ^x and
// cell 0 holds ^; otherwise the input itself starts at cell 0 (annotated
// machines carry their own (^,p) letter there).
class TwoWay {
public:
    Alphabet input;
    Alphabet output;
    std::vector<std::string> names;
    int initial = 0;
    std::vector<char> final;
    std::optional<Buchi> lookahead;
    bool endmarker = true;
    std::vector<TwoWayRule> rules;
    // Names of the look-ahead states used in annotated letters, for display.
    std::vector<std::string> annotation_names;

    std::size_t size() const { return names.size(); }
    int add_state(std::string name, bool is_final = false);
    int state(const std::string& name) const;
    void add_rule(int from, Symbol a, int la, int to, Word out, int dir);
    bool is_final(int q) const { return final[std::size_t(q)] != 0; }

    // Builds the transition table; throws InputError on nondeterminism or bad references.
    void finalize();

    const Alphabet& tape() const { return tape_; }
    int la_count() const { return lookahead ? int(lookahead->size()) : 1; }
    int symbol_index(Symbol s) const { return tape_.index(s); }
    const Move& move(int q, int sym_index, int la = 0) const {
        return table_[(std::size_t(q) * tape_.size() + std::size_t(sym_index)) * std::size_t(la_count()) +
                      std::size_t(la)];
    }
    std::size_t max_output() const;

private:
    Alphabet tape_;
    std::vector<Move> table_;
};

struct AnnotationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StateCapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Look-ahead state of every suffix class of `tape` (a UP word that already
// starts with ^ when the look-ahead expects it). Throws AnnotationError.
std::vector<int> annotation_states(const Buchi& p, const UPWord& tape);
// Annotated UP word of ^x.
UPWord good_annotation(const Buchi& p, const UPWord& x);

enum class NotInDomain { None, Blocked, Trapped, NoFinal, FiniteOutput };

struct TwoWayResult {
    std::optional<UPWord> output;
    NotInDomain reason = NotInDomain::None;
    bool defined() const { return output.has_value(); }
};

std::string describe(NotInDomain r);

// For look-ahead machines x is over the plain alphabet and is annotated first.
TwoWayResult eval_up_2way(const TwoWay& t, const UPWord& x);

TwoWay eliminate_lookahead(const TwoWay& t);

enum class FiniteExit { RightEnd, Blocked, Looped };

struct FiniteRun {
    std::vector<int> states; // state at each step
    std::vector<int> cells;  // cell at each step
    std::vector<std::size_t> out_before; // output length before each step
    Word output;
    FiniteExit exit = FiniteExit::Blocked;
    int exit_state = -1;
    std::size_t steps() const { return states.size(); }
};

// Deterministic simulation on the finite tape (^w or w); machines without look-ahead.
FiniteRun run_finite(const TwoWay& t, const Word& w, bool record = true);

// Generic deterministic two-way Büchi acceptor used by the crossing-sequence construction.
struct TwoWayAcceptor {
    int nstates = 0;
    int initial = 0;
    std::vector<Symbol> letters; // sorted
    std::vector<int> to;         // [q * letters + l], -1 when undefined
    std::vector<signed char> dir;
    std::vector<char> final;
    std::vector<int> rank; // non-decreasing along every run; empty disables pruning
    // [q * letters + l]: the move writes output; empty means every move does.
    // Acceptance needs infinitely many of these as well as infinitely many finals.
    std::vector<char> produces;
    // Underlying deterministic state of each acceptor state (product
    // constructions); a real run crosses a boundary at most once per direction
    // in each of them. Empty means every state is its own.
    std::vector<int> base;
};

Buchi two_way_to_nba(const TwoWayAcceptor& a, std::size_t node_budget = 200000);

// Words of the annotated alphabet whose annotation is a final run of P.
Buchi annotation_checker(const Buchi& p, const std::vector<Symbol>& letters);

// Reads the leading endmarker letter and maps annotated letters to their base symbol.
Buchi project_endmarked(const Buchi& b, const Alphabet& sigma);

// Domain over the tape letters: ^-prefixed words for 2DBT, annotated words
// (with the (^,p) cell) for look-ahead machines.
Buchi domain_nba_tape(const TwoWay& t, std::size_t state_cap = 12);
// Domain over the plain input alphabet.
Buchi domain_nba(const TwoWay& t, std::size_t state_cap = 12);

// Membership in Pref(dom) for the words fed to run_finite: plain words for
// 2DBT, annotated words starting with the (^,p) cell for look-ahead machines.
class PrefDomain {
public:
    PrefDomain(const TwoWay& t, std::size_t state_cap, std::size_t ext_bound);
    bool exact() const { return nfa_.has_value(); }
    bool contains(const Word& w) const;
    // incremental use: state sets of the exact automaton
    const Nfa* nfa() const { return nfa_ ? &*nfa_ : nullptr; }

private:
    const TwoWay* t_;
    std::size_t ext_bound_;
    std::optional<Nfa> nfa_;
};

// Is there y with uy in dom(f) and a mismatch between v and f(uy)?
class MismatchOracle {
public:
    MismatchOracle(const TwoWay& t, Word v, std::size_t state_cap, std::size_t ext_bound);
    bool query(const Word& u) const;
    bool exact() const { return nba_.has_value(); }

private:
    const TwoWay* t_;
    Word v_;
    std::size_t ext_bound_;
    std::optional<Buchi> nba_;
    std::vector<char> live_;
};

bool mismatch_exists(const TwoWay& t, const Word& u, const Word& v, std::size_t state_cap = 12,
                     std::size_t ext_bound = 4);

// Acceptor with outputs erased: annotated letters for look-ahead machines.
TwoWayAcceptor acceptor_of(const TwoWay& t);

} // namespace omega
