#pragma once

#include <string>
#include <vector>

#include "omega/twoway.hpp"

namespace omega {

enum class ExitKind { Unused, Left, Right, Trapped, Blocked };

struct Exit {
    ExitKind kind = ExitKind::Unused;
    int state = -1;
    bool produced = false;
    bool operator==(const Exit& o) const { return kind == o.kind && state == o.state && produced == o.produced; }
};

// Crossing summary of a factor: where the head leaves it for each entry.
// Left entries are the targets of +1 moves, right entries the targets of -1 moves.
struct Behavior {
    std::vector<Exit> from_left;
    std::vector<Exit> from_right;

    bool same_state_map(const Behavior& o) const;
    bool produces() const;
    bool operator==(const Behavior& o) const { return from_left == o.from_left && from_right == o.from_right; }
};

Behavior behavior(const TwoWay& t, const Word& w);
Behavior compose(const TwoWay& t, const Behavior& a, const Behavior& b);
bool is_idempotent(const TwoWay& t, const Word& u2);
bool is_idempotent(const TwoWay& t, const Behavior& b);
// In the run on u1 u2 u3: u2 is behavior-idempotent and the run crosses both
// ends of u2 with the same state sequence.
bool is_idempotent(const TwoWay& t, const Word& u1, const Word& u2, const Word& u3);
// States after each move across the boundary left of cell b, in run order.
std::vector<int> crossing_sequence(const FiniteRun& r, std::size_t b);
// Least k with w^k idempotent.
std::size_t idempotent_power(const TwoWay& t, const Word& w);

enum class TraversalKind { LL, LR, RL, RR };
std::string to_string(TraversalKind k);

struct Traversal {
    TraversalKind kind;
    std::size_t start, end; // step interval of the run
    Word output;
    int entry_state, exit_state;
};

struct Component {
    std::vector<std::size_t> traversals; // exactly one LR or RL among them
    std::size_t anchor;                  // run index where that traversal starts
    TraversalKind kind;
    Word tr_output; // output inserted per extra copy of u2
};

struct RunDecomposition {
    std::vector<Traversal> traversals;
    std::vector<Component> components;
    std::vector<Word> pi; // outputs of pi_0 .. pi_k
    Word output;          // output of the run on u1 u2 u3
    bool producing = false; // the run on u1 u2 u3 writes while the head is inside u2

    std::vector<std::size_t> anchors() const;
};

struct DecomposeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Tape words are the ones fed to run_finite. Throws DecomposeError when u2 is
// not idempotent in (u1, u2, u3) or a run does not reach the right end.
RunDecomposition decompose(const TwoWay& t, const Word& u1, const Word& u2, const Word& u3);
Word rho(const RunDecomposition& d);
Word rho(const TwoWay& t, const Word& u1, const Word& u2, const Word& u3);
Word pump_predict(const RunDecomposition& d, std::size_t n);

} // namespace omega
