#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "omega/oneway.hpp"
#include "omega/twoway.hpp"

namespace omega {

using Evaluator = std::function<std::optional<UPWord>(const UPWord&)>;

Evaluator evaluator_of(const Nft& t);
Evaluator evaluator_of(const TwoWay& t);

enum class Evidence { MismatchAt, Divergent };

// Families u v^n w z (first) and u v^n w2 z2 (second).
struct BadPair {
    Word u, v, w, w2;
    UPWord z, z2;
    Evidence evidence = Evidence::MismatchAt;
    std::size_t position = 0; // MismatchAt: common mismatch position
    int side = 1;             // Divergent: which family fails to converge (1 or 2)

    UPWord first(std::size_t n) const;
    UPWord second(std::size_t n) const;
};

struct BruteForceResult {
    std::optional<BadPair> pair; // absent: none up to the bound
    std::size_t bound = 0;
    std::size_t evaluations = 0;
};

// Images are sampled at n = 1..2*bound+2. For Cont the second family is the
// constant sequence u v^omega, which must lie in the domain.
BruteForceResult brute_force_check(const Evaluator& f, const Alphabet& input, Variant variant, std::size_t bound);
BruteForceResult brute_force_check(const Nft& t, Variant variant, std::size_t bound);
BruteForceResult brute_force_check(const TwoWay& t, Variant variant, std::size_t bound);

// Re-checks the evidence of p by evaluating both families at n = 1..n_max.
bool validate_bad_pair(const Evaluator& f, const BadPair& p, std::size_t n_max);

std::string format_bad_pair(const BadPair& p);

struct Profile {
    std::size_t states = 4;
    std::size_t input = 2;
    std::size_t output = 2;
    std::size_t max_out = 2;
};

// Named profiles (tiny, small, default) or `states,input,output,max_out`.
Profile parse_profile(const std::string& s);

// Reproducible trim functional transducer with at most profile.states states.
Nft random_instance(std::uint64_t seed, const Profile& profile = {});

} // namespace omega
