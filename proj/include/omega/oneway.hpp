#pragma once

#include <optional>
#include <string>
#include <vector>

#include "omega/buchi.hpp"
#include "omega/words.hpp"

namespace omega {

struct NftEdge {
    Symbol symbol;
    int to;
    Word out;
};

class Nft {
public:
    Alphabet input;
    Alphabet output;
    std::vector<std::string> names;
    std::vector<int> initial;
    std::vector<char> final;
    std::vector<std::vector<NftEdge>> succ;

    std::size_t size() const { return names.size(); }
    int add_state(std::string name, bool is_final = false);
    void add_edge(int from, Symbol a, int to, Word out);
    void set_initial(int q);
    int state(const std::string& name) const;
    bool is_final(int q) const { return final[std::size_t(q)] != 0; }
    std::size_t max_output() const;

    // Input automaton (outputs erased).
    Buchi underlying() const;
    void validate() const;
};

struct EpsilonLoopOutput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotFunctional : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Nft trim(const Nft& t);

// f(x), absent outside the domain. Throws EpsilonLoopOutput when x is
// accepted but every accepting lasso has an empty loop output.
std::optional<UPWord> eval_up(const Nft& t, const UPWord& x);

enum class Variant { Cont, UCont };

// Families u v^n w z (side 2) and u v^n w' z' (side 1). For Cont, w' is
// empty and z' = v^omega, so the second family is the constant u v^omega.
struct PatternWitness {
    Variant kind;
    Word u, v, w, w2;
    UPWord z, z2;
    std::size_t position = 0; // stable mismatch position in the images

    UPWord first(std::size_t n) const;
    UPWord second(std::size_t n) const;
};

struct ContinuityVerdict {
    bool continuous = true;
    std::optional<PatternWitness> witness;
};

ContinuityVerdict check_continuity(const Nft& t, Variant variant);

// Mismatch position shared by both image families for n = 1..n_max, if any.
std::optional<std::size_t> validate_witness(const Nft& t, const PatternWitness& w, std::size_t n_max);

// No y with uy in dom(f) has f(uy) mismatching w. Expects a trimmed T.
bool universal_prefix_consistent(const Nft& t, const Word& u, const Word& w);

struct FunctionalityCounterexample {
    UPWord x;
    UPWord out1;
    UPWord out2;
};

struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Delays are explored up to bound * (longest output). A non-zero max_nodes
// caps the product size and throws BudgetExceeded past it.
std::optional<FunctionalityCounterexample> functionality_check(const Nft& t, std::size_t bound,
                                                               std::size_t max_nodes = 0);

// Longest output over the run prefixes of a trimmed T on u; absent when no run reads u.
std::optional<std::size_t> longest_run_output(const Nft& t, const Word& u);

} // namespace omega
