#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "omega/buchi.hpp"
#include "omega/oneway.hpp"
#include "omega/twoway.hpp"

namespace omega {

struct ParseError : std::runtime_error {
    std::size_t line;
    ParseError(std::size_t line, const std::string& msg);
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class MachineKind { Buchi, Nft, TwoWayBasic, TwoWayLookahead };

std::string to_string(MachineKind k);

struct MachineFile {
    MachineKind kind = MachineKind::Buchi;
    std::variant<Buchi, Nft, TwoWay> machine;

    const Buchi& buchi() const { return std::get<Buchi>(machine); }
    const Nft& nft() const { return std::get<Nft>(machine); }
    const TwoWay& twoway() const { return std::get<TwoWay>(machine); }
};

// Text format: one `key: values` directive per line, `#` starts a comment.
// Two-way machines come back finalized.
MachineFile parse_machine(std::string_view text);
MachineFile load_machine(const std::string& path);

// Canonical text: states, symbols and transitions in sorted order.
std::string serialize(const MachineFile& m);
std::string serialize(const Buchi& b);
std::string serialize(const Nft& t);
std::string serialize(const TwoWay& t);

// Equality up to state numbering (states are matched by name).
bool same_machine(const MachineFile& a, const MachineFile& b);

} // namespace omega
