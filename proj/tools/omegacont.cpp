#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include "omega/buchi.hpp"
#include "omega/continuity_regular.hpp"
#include "omega/format.hpp"
#include "omega/loops.hpp"
#include "omega/oneway.hpp"
#include "omega/oracle.hpp"
#include "omega/stream_eval.hpp"
#include "omega/twoway.hpp"

using namespace omega;

namespace {

enum Exit { kTrue = 0, kFalse = 1, kUnknown = 2, kUsage = 64, kData = 65 };

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::size_t state_cap = 12;
    std::size_t ext_bound = 4;
};

Variant parse_variant(const std::string& s) {
    if (s == "cont") return Variant::Cont;
    if (s == "ucont") return Variant::UCont;
    throw DataError("variant must be cont or ucont");
}

SearchBounds parse_bounds(const std::string& s) {
    SearchBounds b;
    std::size_t v[3];
    std::istringstream in(s);
    std::string part;
    for (auto& x : v) {
        if (!std::getline(in, part, ',')) throw DataError("bound must be L1,L2,L3");
        try {
            x = std::stoul(part);
        } catch (const std::exception&) {
            throw DataError("bound field `" + part + "` is not a number");
        }
    }
    b.max_len_u1 = v[0];
    b.max_len_u2 = v[1];
    b.max_len_u3 = v[2];
    return b;
}

void print_pattern(const PatternWitness& w) {
    std::cout << "u  = " << format_word(w.u) << "\nv  = " << format_word(w.v) << "\n";
    std::cout << "w  = " << format_word(w.w) << ", z  = " << format_up(w.z) << "\n";
    std::cout << "w' = " << format_word(w.w2) << ", z' = " << format_up(w.z2) << "\n";
    std::cout << "mismatch at " << w.position << "\n";
}

int run_witness(const TwoWay& t, Variant variant, const SearchBounds& bounds, const Globals& g) {
    auto res = search_witness(t, variant, bounds, {g.state_cap, g.ext_bound});
    if (!res.exact_prefix_check) std::cerr << "note: Pref(dom) checked by bounded extensions\n";
    if (!res.witness) {
        std::cout << "NoWitnessUpTo " << bounds.max_len_u1 << "," << bounds.max_len_u2 << "," << bounds.max_len_u3
                  << "\n";
        return kUnknown;
    }
    std::cout << "NotContinuous\n" << format_witness(t, *res.witness);
    std::cout << "verified n = 1.." << bounds.verify_n << "\n";
    return kFalse;
}

int check_cont(const MachineFile& m, Variant variant, const SearchBounds& bounds, const Globals& g) {
    if (m.kind == MachineKind::Buchi) throw DataError("continuity needs a transducer");
    if (m.kind != MachineKind::Nft) return run_witness(m.twoway(), variant, bounds, g);
    auto v = check_continuity(m.nft(), variant);
    if (v.continuous) {
        std::cout << (variant == Variant::Cont ? "Continuous\n" : "UniformlyContinuous\n");
        return kTrue;
    }
    std::cout << "NotContinuous\n";
    print_pattern(*v.witness);
    if (!validate_witness(m.nft(), *v.witness, 5)) std::cerr << "warning: witness did not re-validate\n";
    return kFalse;
}

std::optional<UPWord> evaluate(const MachineFile& m, const UPWord& x, std::string& why) {
    switch (m.kind) {
    case MachineKind::Buchi: throw DataError("eval needs a transducer");
    case MachineKind::Nft: {
        auto y = eval_up(m.nft(), x);
        if (!y) why = "no accepting run";
        return y;
    }
    default: {
        auto r = eval_up_2way(m.twoway(), x);
        if (!r.defined()) why = describe(r.reason);
        return r.output;
    }
    }
}

Symbol single_symbol(const std::string& s) {
    Word w = from_utf8(s);
    if (w.size() != 1) throw DataError("expected one symbol per line, got `" + s + "`");
    return w[0];
}

bool refuse_stream(const MachineFile& m, const Globals& g) {
    if (m.kind == MachineKind::Nft) return !check_continuity(m.nft(), Variant::Cont).continuous;
    return search_witness(m.twoway(), Variant::Cont, {}, {g.state_cap, g.ext_bound}).witness.has_value();
}

int stream(const MachineFile& m, bool force, bool raw, const Globals& g) {
    if (m.kind == MachineKind::Buchi) throw DataError("stream needs a transducer");
    if (!force && refuse_stream(m, g)) {
        std::cerr << "refusing to stream: the machine is not continuous (use --force)\n";
        return kFalse;
    }
    StreamOptions opt{g.state_cap, g.ext_bound};
    StreamState st = m.kind == MachineKind::Nft ? StreamState(m.nft(), opt) : StreamState(m.twoway(), opt);
    auto feed = [&](Symbol a) {
        Word out;
        try {
            out = st.step(a);
        } catch (const DeadInput& e) {
            std::cout.flush();
            std::cerr << "dead input after " << st.consumed().size() << " symbols: " << e.what() << "\n";
            return false;
        }
        if (!out.empty()) {
            std::cout << to_utf8(out);
            if (!raw) std::cout << "\n";
            std::cout.flush();
        }
        return true;
    };
    std::string line;
    if (raw) {
        while (std::getline(std::cin, line))
            for (Symbol a : from_utf8(line))
                if (a != U' ' && a != U'\t' && a != U'\r' && !feed(a)) return kData;
    } else {
        while (std::getline(std::cin, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            if (!feed(single_symbol(line))) return kData;
        }
    }
    if (!st.exact()) std::cerr << "note: commitments used bounded extension search\n";
    return kTrue;
}

const TwoWay& plain_two_way(const MachineFile& m) {
    if (m.kind != MachineKind::TwoWayBasic) throw DataError("this command needs a 2dbt machine");
    return m.twoway();
}

void print_decomposition(const RunDecomposition& d) {
    std::cout << "output = " << format_word(d.output) << "\n";
    std::cout << "producing = " << (d.producing ? "yes" : "no") << "\n";
    for (std::size_t i = 0; i < d.traversals.size(); ++i) {
        const auto& tv = d.traversals[i];
        std::cout << "traversal " << i << ": " << to_string(tv.kind) << " steps [" << tv.start << "," << tv.end
                  << ") output " << format_word(tv.output) << "\n";
    }
    for (std::size_t i = 0; i < d.components.size(); ++i) {
        const auto& c = d.components[i];
        std::cout << "component " << i << ": " << to_string(c.kind) << " anchor " << c.anchor << " inserted "
                  << format_word(c.tr_output) << "\n";
    }
    for (std::size_t i = 0; i < d.pi.size(); ++i) std::cout << "pi" << i << " = " << format_word(d.pi[i]) << "\n";
    std::cout << "rho = " << format_word(rho(d)) << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Continuity checks and streaming evaluation for transducers over infinite words"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--state-cap", g.state_cap, "two-way to Buchi conversion limit on machine states")
        ->capture_default_str();
    app.add_option("--ext-bound", g.ext_bound, "stem and period bound of the UP-extension fallback")
        ->capture_default_str();

    std::string file, word1, word2, word3, variant = "cont", bound_str = "3,3,3", profile = "default";
    std::size_t verify_n = 6, bound_n = 3;
    std::uint64_t seed = 0;
    bool force = false, raw = false;

    auto with_file = [&](CLI::App* sub) {
        sub->add_option("FILE", file, "machine file")->required();
        sub->fallthrough();
        return sub;
    };
    auto* c_cont = with_file(app.add_subcommand("check-cont", "decide continuity"));
    auto* c_ucont = with_file(app.add_subcommand("check-ucont", "decide uniform continuity"));
    for (auto* c : {c_cont, c_ucont}) {
        c->add_option("--bound", bound_str, "two-way search bound L1,L2,L3")->capture_default_str();
        c->add_option("--verify", verify_n, "two-way witness verification depth")->capture_default_str();
    }
    auto* c_eval = with_file(app.add_subcommand("eval", "evaluate on an ultimately periodic word u(v)"));
    c_eval->add_option("UPWORD", word1)->required();
    auto* c_member = with_file(app.add_subcommand("member", "membership of u(v) in the language or domain"));
    c_member->add_option("UPWORD", word1)->required();
    auto* c_stream = with_file(app.add_subcommand("stream", "evaluate symbols read from standard input"));
    c_stream->add_flag("--force", force, "stream even when the machine is not continuous");
    c_stream->add_flag("--raw", raw, "read and write raw characters instead of one symbol per line");
    auto* c_mismatch = with_file(app.add_subcommand("mismatch", "is there an extension of U whose image mismatches V"));
    c_mismatch->add_option("U", word1)->required();
    c_mismatch->add_option("V", word2)->required();
    auto* c_witness = with_file(app.add_subcommand("witness", "bounded witness search on a two-way machine"));
    c_witness->add_option("--variant", variant)->check(CLI::IsMember({"cont", "ucont"}))->capture_default_str();
    c_witness->add_option("--bound", bound_str, "L1,L2,L3")->capture_default_str();
    c_witness->add_option("--verify", verify_n)->capture_default_str();
    auto* c_rho = with_file(app.add_subcommand("rho", "output prefix fixed by pumping u2"));
    auto* c_decompose = with_file(app.add_subcommand("decompose", "traversals and components of the run on u1 u2 u3"));
    for (auto* c : {c_rho, c_decompose}) {
        c->add_option("U1", word1)->required();
        c->add_option("U2", word2)->required();
        c->add_option("U3", word3)->required();
    }
    auto* c_trim = with_file(app.add_subcommand("trim", "remove useless states"));
    auto* c_closure = with_file(app.add_subcommand("closure", "topological closure of a Buchi automaton"));
    auto* c_oracle = with_file(app.add_subcommand("oracle", "brute-force search for a bad pair"));
    c_oracle->add_option("--variant", variant)->check(CLI::IsMember({"cont", "ucont"}))->capture_default_str();
    c_oracle->add_option("--bound", bound_n)->capture_default_str();
    auto* c_gen = app.add_subcommand("gen", "write a random functional one-way transducer");
    c_gen->add_option("--seed", seed)->capture_default_str();
    c_gen->add_option("--profile", profile, "tiny, small, default or states,input,output,max_out")
        ->capture_default_str();
    c_gen->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    std::ios::sync_with_stdio(false);
    try {
        if (c_gen->parsed()) {
            std::cout << serialize(random_instance(seed, parse_profile(profile)));
            return kTrue;
        }
        const MachineFile m = load_machine(file);
        if (c_cont->parsed() || c_ucont->parsed()) {
            auto b = parse_bounds(bound_str);
            b.verify_n = verify_n;
            return check_cont(m, c_cont->parsed() ? Variant::Cont : Variant::UCont, b, g);
        }
        if (c_eval->parsed()) {
            std::string why;
            auto y = evaluate(m, parse_up(word1), why);
            if (!y) {
                std::cout << "undefined: " << why << "\n";
                return kFalse;
            }
            std::cout << format_up(*y) << "\n";
            return kTrue;
        }
        if (c_member->parsed()) {
            const UPWord x = parse_up(word1);
            bool in;
            if (m.kind == MachineKind::Buchi) {
                in = member_up(m.buchi(), x);
            } else if (m.kind == MachineKind::Nft) {
                in = member_up(m.nft().underlying(), x);
            } else {
                in = eval_up_2way(m.twoway(), x).defined();
            }
            std::cout << (in ? "accepted" : "rejected") << "\n";
            return in ? kTrue : kFalse;
        }
        if (c_stream->parsed()) return stream(m, force, raw, g);
        if (c_mismatch->parsed()) {
            const Word u = parse_word(word1), v = parse_word(word2);
            bool found;
            if (m.kind == MachineKind::Buchi) throw DataError("mismatch needs a transducer");
            if (m.kind == MachineKind::Nft) {
                found = !universal_prefix_consistent(trim(m.nft()), u, v);
            } else {
                found = mismatch_exists(m.twoway(), u, v, g.state_cap, g.ext_bound);
            }
            std::cout << (found ? "true" : "false") << "\n";
            return found ? kTrue : kFalse;
        }
        if (c_witness->parsed()) {
            if (m.kind == MachineKind::Buchi || m.kind == MachineKind::Nft)
                throw DataError("witness needs a two-way machine; use check-cont for nft files");
            auto b = parse_bounds(bound_str);
            b.verify_n = verify_n;
            return run_witness(m.twoway(), parse_variant(variant), b, g);
        }
        if (c_rho->parsed() || c_decompose->parsed()) {
            const TwoWay& t = plain_two_way(m);
            auto d = decompose(t, parse_word(word1), parse_word(word2), parse_word(word3));
            if (c_rho->parsed()) {
                std::cout << format_word(rho(d)) << "\n";
                std::cout << "components:";
                for (const auto& c : d.components) std::cout << " " << to_string(c.kind) << "@" << c.anchor;
                std::cout << "\n";
            } else {
                print_decomposition(d);
            }
            return kTrue;
        }
        if (c_trim->parsed()) {
            if (m.kind == MachineKind::Buchi) {
                std::cout << serialize(trim(m.buchi()));
            } else if (m.kind == MachineKind::Nft) {
                std::cout << serialize(trim(m.nft()));
            } else {
                throw DataError("trim works on buchi and nft files");
            }
            return kTrue;
        }
        if (c_closure->parsed()) {
            if (m.kind != MachineKind::Buchi) throw DataError("closure works on buchi files");
            std::cout << serialize(closure(m.buchi()));
            return kTrue;
        }
        if (c_oracle->parsed()) {
            const Variant v = parse_variant(variant);
            BruteForceResult r;
            if (m.kind == MachineKind::Buchi) throw DataError("oracle needs a transducer");
            r = m.kind == MachineKind::Nft ? brute_force_check(m.nft(), v, bound_n)
                                           : brute_force_check(m.twoway(), v, bound_n);
            if (!r.pair) {
                std::cout << "NoneUpTo " << bound_n << " (" << r.evaluations << " evaluations)\n";
                return kUnknown;
            }
            std::cout << "BadPair\n" << format_bad_pair(*r.pair);
            return kFalse;
        }
    } catch (const ParseError& e) {
        std::cerr << file << ": " << e.what() << "\n";
        return kData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kData;
    }
    return kUsage;
}
