#include "omega/stream_eval.hpp"

#include <algorithm>

namespace omega {

StreamState::StreamState(const Nft& t, StreamOptions opt) : one_(trim(t)), opt_(opt) {
    pref_ = pref_automaton(one_->underlying());
}

StreamState::StreamState(const TwoWay& t, StreamOptions opt) : two_(t), opt_(opt) {
    try {
        pref_ = pref_automaton(domain_nba(t, opt.state_cap));
    } catch (const StateCapExceeded&) {
        exact_ = false;
    }
}

bool StreamState::alive(const Word& u) const {
    if (pref_) return pref_->accepts(u);
    for (const auto& y : sample_up_words(two_->input, opt_.ext_bound, opt_.ext_bound)) {
        if (y.classes() > opt_.ext_bound) continue;
        if (eval_up_2way(*two_, up_concat(u, y)).defined()) return true;
    }
    return false;
}

bool StreamState::safe(const Word& v) const {
    if (one_) return universal_prefix_consistent(*one_, consumed_, v);
    MismatchOracle oracle(*two_, v, opt_.state_cap, opt_.ext_bound);
    if (!oracle.exact()) exact_ = false;
    return !oracle.query(consumed_);
}

// Output is never committed past what the runs on the consumed prefix have
// produced, so a fully determined image does not loop forever.
std::size_t StreamState::commit_cap() const {
    std::size_t seen = 0;
    if (one_) {
        seen = longest_run_output(*one_, consumed_).value_or(0);
    } else if (!two_->lookahead) {
        seen = run_finite(*two_, consumed_).output.size();
    } else {
        // a non-looping run visits each cell at most |Q| times
        seen = (consumed_.size() + 1) * two_->size() * two_->max_output();
    }
    return std::max(committed_.size() + 1, seen);
}

Word StreamState::step(Symbol a) {
    const Alphabet& in = one_ ? one_->input : two_->input;
    if (!in.contains(a)) throw InputError("symbol " + format_symbol(a) + " outside the input alphabet");
    Word next = consumed_ + a;
    if (!alive(next)) throw DeadInput("no domain word starts with " + format_word(next));
    consumed_ = std::move(next);
    const Alphabet& out = one_ ? one_->output : two_->output;
    Word emitted;
    const std::size_t cap = commit_cap();
    while (committed_.size() < cap) {
        bool found = false;
        for (Symbol g : out.symbols()) {
            if (safe(committed_ + g)) {
                committed_.push_back(g);
                emitted.push_back(g);
                found = true;
                break;
            }
        }
        if (!found) break;
    }
    return emitted;
}

} // namespace omega
