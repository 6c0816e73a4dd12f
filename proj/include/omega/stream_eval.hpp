#pragma once

#include <memory>
#include <optional>
#include <variant>

#include "omega/oneway.hpp"
#include "omega/twoway.hpp"

namespace omega {

struct DeadInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StreamOptions {
    std::size_t state_cap = 12;
    std::size_t ext_bound = 4;
};

// Streaming evaluation: a symbol of output is committed once every domain
// extension of the consumed input agrees with it.
class StreamState {
public:
    StreamState(const Nft& t, StreamOptions opt = {});
    StreamState(const TwoWay& t, StreamOptions opt = {});

    // Consumes a and returns the newly committed output (possibly empty).
    // Throws DeadInput when consumed.a has no extension in the domain; the
    // state is left unchanged in that case.
    Word step(Symbol a);

    const Word& consumed() const { return consumed_; }
    const Word& committed() const { return committed_; }
    // false when the two-way oracles fell back to bounded extension search
    bool exact() const { return exact_; }

private:
    bool alive(const Word& u) const;
    bool safe(const Word& v) const;
    std::size_t commit_cap() const;

    std::optional<Nft> one_;
    std::optional<TwoWay> two_;
    StreamOptions opt_;
    std::optional<Nfa> pref_;
    mutable bool exact_ = true;
    Word consumed_, committed_;
};

} // namespace omega
