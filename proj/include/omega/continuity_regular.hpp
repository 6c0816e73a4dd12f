#pragma once

#include <optional>
#include <string>

#include "omega/loops.hpp"
#include "omega/oneway.hpp"
#include "omega/twoway.hpp"

namespace omega {

// Triples are tape words of the machine the search runs on: plain words for
// a 2DBT, annotated words for a look-ahead machine, where u1 starts with the
// (^,p) cell. That cell is not counted against max_len_u1.
struct RegularWitness {
    Variant variant = Variant::Cont;
    Word u1, u2, u3;
    Word u1p, u2p, u3p;
    std::size_t mismatch_position = 0;
    Word rho1, rho2;
};

struct SearchBounds {
    std::size_t max_len_u1 = 3, max_len_u2 = 3, max_len_u3 = 3;
    std::size_t verify_n = 4;
};

struct SearchOptions {
    std::size_t state_cap = 12;
    std::size_t ext_bound = 4;
};

struct SearchResult {
    std::optional<RegularWitness> witness; // absent: no witness up to the bounds
    bool exact_prefix_check = true;        // false when Pref(dom) fell back to bounded extensions
    std::size_t triples = 0;               // candidate triples that passed the side conditions
};

// The machine the search runs on: T itself, or T with look-ahead eliminated.
TwoWay search_machine(const TwoWay& t);

SearchResult search_witness(const TwoWay& t, Variant variant, const SearchBounds& bounds,
                            const SearchOptions& opt = {});

bool verify_witness(const TwoWay& t, const RegularWitness& w, std::size_t n, const SearchOptions& opt = {});

// Plain input word of a tape word (annotations and the endmarker dropped).
Word project(const Word& w);

std::string format_witness(const TwoWay& t, const RegularWitness& w);

} // namespace omega
