#pragma once

#include <optional>
#include <string>
#include <vector>

#include "omega/words.hpp"

namespace omega {

struct BuchiEdge {
    Symbol symbol;
    int to;
};

class Buchi {
public:
    Alphabet alphabet;
    std::vector<std::string> names;
    std::vector<int> initial;
    std::vector<char> final;
    std::vector<std::vector<BuchiEdge>> succ;

    std::size_t size() const { return names.size(); }
    int add_state(std::string name, bool is_final = false);
    void add_edge(int from, Symbol a, int to);
    void set_initial(int q);
    // -1 when absent
    int state(const std::string& name) const;
    bool is_final(int q) const { return final[std::size_t(q)] != 0; }

    // structural invariants; throws InputError
    void validate() const;
};

struct Lasso {
    Word stem;
    Word loop;
    std::vector<int> stem_run; // |stem|+1 states
    std::vector<int> loop_run; // |loop|+1 states, first == last
    UPWord word() const { return up_normalize(stem, loop); }
};

// Runs of B on x starting at `from` (default: initial states).
bool member_up(const Buchi& b, const UPWord& x, std::optional<int> from = std::nullopt);
// States q with x in L(B, q).
std::vector<int> accepting_starts(const Buchi& b, const UPWord& x);
// Entry [q * x.classes() + i] tells whether the suffix of x at class i is in L(B, q).
std::vector<char> suffix_acceptance(const Buchi& b, const UPWord& x);

// Absent iff L(B) is empty.
std::optional<Lasso> is_empty(const Buchi& b);
// Lasso accepted from state q (ignores the initial set).
std::optional<Lasso> lasso_from(const Buchi& b, int q);

Buchi trim(const Buchi& b);
Buchi product(const Buchi& a, const Buchi& b);
Buchi closure(const Buchi& b);

// Finite-word acceptor.
class Nfa {
public:
    Alphabet alphabet;
    std::vector<int> initial;
    std::vector<char> accepting;
    std::vector<std::vector<BuchiEdge>> succ;

    std::size_t size() const { return succ.size(); }
    std::vector<int> step(const std::vector<int>& set, Symbol a) const;
    std::vector<int> run(const Word& w) const;
    bool accepts(const Word& w) const;
};

Nfa pref_automaton(const Buchi& b);

// Co-completeness is only ever confirmed up to the sampling bound.
enum class PropheticKind { NotCodeterministic, NotCocompleteUpTo, CocompleteUpTo };

struct PropheticReport {
    PropheticKind kind;
    std::optional<UPWord> witness;
    std::size_t bound = 0;
    bool codeterministic = false;
};

// Words containing the endmarker are only sampled in the form ^x.
PropheticReport prophetic_check(const Buchi& b, std::size_t bound);

// States that can still reach an accepting cycle.
std::vector<char> live_states(const Buchi& b);

// All UP words u(v) with |u| <= max_prefix and 1 <= |v| <= max_period, canonical and deduplicated.
std::vector<UPWord> sample_up_words(const Alphabet& alpha, std::size_t max_prefix, std::size_t max_period);

} // namespace omega
