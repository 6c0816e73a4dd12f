// One PASS/FAIL line per acceptance criterion. Exact comparisons throughout:
// every check below is an equality or a count, so the tolerances are zero.
#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>

#include "omega/continuity_regular.hpp"
#include "omega/loops.hpp"
#include "omega/oracle.hpp"
#include "omega/stream_eval.hpp"
#include "support.hpp"

using namespace omega;
using namespace omega::test;

namespace {

constexpr std::size_t kPumpTriples = 100;
constexpr std::size_t kDomainSample = 50;
constexpr std::size_t kCorpusSize = 200;
constexpr std::size_t kOracleBound = 3;
constexpr std::size_t kVerifyN = 6;
constexpr std::size_t kStreamLength = 60;
constexpr std::size_t kStarveLength = 200;
constexpr std::size_t kMismatchLen = 4;
constexpr std::size_t kExtensionBound = 4;
constexpr std::size_t kClosureMachines = 20;
constexpr std::size_t kPrefLength = 12;
constexpr double kSecondsPerCriterion = 60.0;

struct Outcome {
    bool pass = true;
    std::ostringstream note;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (pass) note << "failed: ";
            else note << "; ";
            note << what;
            pass = false;
        }
    }
};

int run_cli(const std::string& args, const std::string& input, std::string* out = nullptr) {
    std::string cmd = "printf '" + input + "' | " + std::string(OMEGACONT_PATH) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return -1;
    std::string text;
    char buf[256];
    while (std::fgets(buf, sizeof buf, p)) text += buf;
    int status = pclose(p);
    if (out) *out = text;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string fixture(const char* name) { return std::string(FIXTURE_DIR) + "/" + name; }

void criterion1(Outcome& o) {
    const Nft tnc = load("t_nc.nft").nft(), tc = load("t_c.nft").nft(), tinf = load("t_inf.nft").nft();
    auto nc = check_continuity(tnc, Variant::Cont);
    o.require(!nc.continuous && nc.witness && validate_witness(tnc, *nc.witness, 5) == nc.witness->position,
              "T_NC verdict");
    o.require(check_continuity(tc, Variant::Cont).continuous, "T_C cont");
    o.require(check_continuity(tc, Variant::UCont).continuous, "T_C ucont");
    auto inf = check_continuity(tinf, Variant::Cont);
    o.require(!inf.continuous && validate_witness(tinf, *inf.witness, 5).has_value(), "T_INF verdict");
    o.require(run_cli("check-cont " + fixture("t_nc.nft"), "") == 1, "CLI check-cont T_NC exit");
    o.require(run_cli("check-cont " + fixture("t_c.nft"), "") == 0, "CLI check-cont T_C exit");
    o.require(run_cli("check-ucont " + fixture("t_c.nft"), "") == 0, "CLI check-ucont T_C exit");
    o.require(run_cli("check-cont " + fixture("t_inf.nft"), "") == 1, "CLI check-cont T_INF exit");
}

void criterion2(Outcome& o) {
    const Nft tc = load("t_c.nft").nft();
    const TwoWay j = load("j.2dft").twoway(), dbl = load("dbl.2dbt").twoway();
    o.require(eval_up(tc, U("aa(c)")) == U("aaaa(c)"), "T_C aa(c)");
    o.require(eval_up(tc, U("a(d)")) == U("a(d)"), "T_C a(d)");
    o.require(eval_up_2way(j, U("aab(b)")).output == U("aa(b)"), "J aab(b)");
    o.require(eval_up_2way(j, U("(b)")).output == U("(b)"), "J (b)");
    o.require(eval_up_2way(dbl, U("ab#c#(d#)")).output == U("ababcc(dd)"), "DBL ab#c#(d#)");
}

void criterion3(Outcome& o) {
    const TwoWay j = load("j.2dft").twoway();
    const TwoWay tt = eliminate_lookahead(j);
    const Buchi& p = *j.lookahead;
    std::size_t sampled = 0, corrupted = 0, rejected = 0;
    for (const auto& x : sample_up_words(j.input, 7, 3)) {
        if (sampled == kDomainSample) break;
        auto fx = eval_up_2way(j, x);
        if (!fx.defined()) continue;
        ++sampled;
        const UPWord a = good_annotation(p, x);
        o.require(eval_up_2way(tt, a).output == fx.output, "T~ differs on " + format_up(x));
        for (std::size_t cls = 0; cls < a.classes(); ++cls) {
            for (int q = 0; q < int(p.size()); ++q) {
                UPWord bad = a;
                Symbol& s = cls < bad.prefix.size() ? bad.prefix[cls] : bad.period[cls - bad.prefix.size()];
                if (annotation_of(s) == q) continue;
                s = annotate(base_of(s), q);
                ++corrupted;
                rejected += !eval_up_2way(tt, bad).defined();
            }
        }
    }
    o.require(sampled == kDomainSample, "domain sample too small");
    o.require(rejected == corrupted, "corrupted annotation accepted");
    o.note << sampled << " words, " << rejected << "/" << corrupted << " corruptions rejected";
}

struct Triple {
    TwoWay t;
    Word u1, u2, u3;
    RunDecomposition d;
};

std::vector<Triple> pump_corpus(std::uint64_t seed, std::size_t want) {
    Gen g(seed);
    const std::vector<Symbol> letters{U'#', U'a', U'b'};
    std::vector<Triple> out;
    for (int iter = 0; iter < 200000 && out.size() < want; ++iter) {
        TwoWay t = iter % 2 ? random_sweeper(g) : random_2dbt(g, 3);
        for (int k = 0; k < 8; ++k) {
            Word w = g.word(letters, 1, 3);
            const std::size_t pw = idempotent_power(t, w);
            if (pw * w.size() > 12) continue;
            Word u1 = g.word(letters, 0, 3), u2 = power(w, pw), u3 = g.word(letters, 0, 3);
            // decompose must succeed on every idempotent loop that reaches the right end
            if (!is_idempotent(t, u1, u2, u3)) continue;
            if (run_finite(t, u1 + u2 + u3, false).exit != FiniteExit::RightEnd ||
                run_finite(t, u1 + u2 + u2 + u3, false).exit != FiniteExit::RightEnd)
                continue;
            out.push_back({t, u1, u2, u3, decompose(t, u1, u2, u3)});
            break;
        }
    }
    return out;
}

void criterion4(Outcome& o) {
    auto triples = pump_corpus(4, kPumpTriples);
    const TwoWay dbl = load("dbl.2dbt").twoway();
    triples.push_back({dbl, W("ab#"), W("c#"), W("d#"), decompose(dbl, W("ab#"), W("c#"), W("d#"))});
    std::size_t ok = 0;
    for (const auto& tr : triples) {
        bool all = true;
        for (std::size_t n = 0; n <= 3; ++n) {
            auto r = run_finite(tr.t, tr.u1 + power(tr.u2, n + 1) + tr.u3);
            all = all && r.exit == FiniteExit::RightEnd && pump_predict(tr.d, n) == r.output;
        }
        ok += all;
    }
    o.require(triples.size() >= kPumpTriples + 1, "corpus too small");
    o.require(ok == triples.size(), "pumping identity violated");
    o.note << ok << "/" << triples.size() << " triples, n = 0..3";
}

void criterion5(Outcome& o) {
    const TwoWay dbl = load("dbl.2dbt").twoway();
    o.require(rho(dbl, W("ab#"), W("c#"), W("d#")) == W("ababc"), "rho(DBL)");
    auto triples = pump_corpus(5, kPumpTriples);
    triples.push_back({dbl, W("ab#"), W("c#"), W("d#"), decompose(dbl, W("ab#"), W("c#"), W("d#"))});
    std::size_t producing = 0, quiet = 0, bad = 0;
    for (const auto& tr : triples) {
        const Word r = rho(tr.d);
        bool ok = true;
        for (std::size_t n = 1; n <= 5; ++n) {
            const Word fn = run_finite(tr.t, tr.u1 + power(tr.u2, n) + tr.u3).output;
            ok = ok && is_prefix(r, fn);
            if (!tr.d.producing) ok = ok && r == fn;
        }
        if (tr.d.producing) {
            ++producing;
            const Word s = rho(tr.t, tr.u1 + tr.u2, tr.u2, tr.u2 + tr.u3);
            ok = ok && is_prefix(r, s) && r.size() < s.size();
        } else {
            ++quiet;
        }
        bad += !ok;
    }
    o.require(bad == 0, std::to_string(bad) + " triples break a law");
    o.require(producing > 0 && quiet > 0, "corpus lacks producing or non-producing loops");
    o.note << producing << " producing, " << quiet << " non-producing triples";
}

void criterion6(Outcome& o) {
    const TwoWay finf = load("f_inf.2dft").twoway(), j = load("j.2dft").twoway(), dbl = load("dbl.2dbt").twoway();
    auto a = search_witness(finf, Variant::Cont, {2, 2, 2, kVerifyN});
    o.require(a.witness && project(a.witness->u2).size() == 1 && project(a.witness->u2p).size() == 1 &&
                  verify_witness(finf, *a.witness, kVerifyN),
              "F_INF witness");
    auto b = search_witness(j, Variant::Cont, {3, 2, 3, kVerifyN});
    o.require(b.witness && verify_witness(j, *b.witness, kVerifyN), "J witness");
    auto c = search_witness(dbl, Variant::Cont, {3, 3, 3, kVerifyN});
    o.require(!c.witness, "DBL witness found");
    o.require(run_cli("witness " + fixture("f_inf.2dft") + " --variant cont --bound 2,2,2 --verify 6", "") == 1,
              "CLI F_INF exit");
    o.require(run_cli("witness " + fixture("j.2dft") + " --variant cont --bound 3,2,3 --verify 6", "") == 1,
              "CLI J exit");
    o.require(run_cli("witness " + fixture("dbl.2dbt") + " --variant cont --bound 3,3,3", "") == 2, "CLI DBL exit");
    o.note << "DBL: " << c.triples << " triples searched";
}

void criterion7(Outcome& o) {
    std::size_t contradictions = 0, cont = 0, confirmed = 0, unconfirmed = 0;
    for (std::uint64_t seed = 0; seed < kCorpusSize; ++seed) {
        const Nft t = random_instance(seed);
        o.require(t.size() <= 4, "generated machine too large");
        for (Variant v : {Variant::Cont, Variant::UCont}) {
            auto exact = check_continuity(t, v);
            auto brute = brute_force_check(t, v, kOracleBound);
            if (v == Variant::Cont) cont += exact.continuous;
            if (brute.pair && exact.continuous) ++contradictions;
            if (!exact.continuous) (brute.pair ? confirmed : unconfirmed)++;
        }
    }
    o.require(contradictions == 0, std::to_string(contradictions) + " contradictions");
    o.note << kCorpusSize << " machines (" << cont << " continuous), bound " << kOracleBound << ", "
           << contradictions << " contradictions, " << confirmed << " negative verdicts confirmed, " << unconfirmed
           << " unconfirmed";
}

void criterion8(Outcome& o) {
    const Nft tc = load("t_c.nft").nft();
    const UPWord target = U("aaaa(c)");
    StreamState s(tc);
    const Word in = W("aa") + Word(kStreamLength - 2, U'c');
    for (std::size_t k = 1; k <= in.size(); ++k) {
        s.step(in[k - 1]);
        o.require(is_prefix(s.committed(), target), "T_C commit off target at k=" + std::to_string(k));
        if (k >= 3) o.require(s.committed().size() >= k + 1, "T_C lag at k=" + std::to_string(k));
    }
    StreamState n(load("t_nc.nft").nft());
    std::size_t committed = 0;
    for (std::size_t k = 0; k < kStarveLength; ++k) committed += n.step(U'a').size();
    o.require(committed == 0, "T_NC committed output");
    std::string out;
    o.require(run_cli("stream " + fixture("t_nc.nft"), "a\\na\\nb\\n", &out) == 1 && out.empty(),
              "stream did not refuse T_NC");
    o.require(run_cli("stream --force " + fixture("t_nc.nft"), "a\\na\\nb\\n", &out) == 0 && out == "ddd\n",
              "stream --force T_NC");
    o.require(run_cli("stream " + fixture("t_c.nft"), "a\\nd\\nc\\n") == 65, "DeadInput exit code");
}

bool brute_mismatch(const std::vector<UPWord>& images, const Word& v) {
    for (const auto& x : images)
        if (mismatch(v, x)) return true;
    return false;
}

void criterion9(Outcome& o) {
    std::size_t queries = 0, disagreements = 0;
    for (const char* f : {"t_nc.nft", "t_c.nft", "t_inf.nft"}) {
        const Nft t = trim(load(f).nft());
        const auto ys = extensions(t.input, kExtensionBound);
        for (const auto& u : enumerate_words(t.input, 0, kMismatchLen)) {
            std::vector<UPWord> images;
            for (const auto& y : ys)
                if (auto fx = eval_up(t, up_concat(u, y))) images.push_back(*fx);
            for (const auto& v : enumerate_words(t.output, 1, kMismatchLen)) {
                ++queries;
                disagreements += !universal_prefix_consistent(t, u, v) != brute_mismatch(images, v);
            }
        }
    }
    for (const char* f : {"dbl.2dbt", "j.2dft", "f_inf.2dft"}) {
        const TwoWay t = load(f).twoway();
        const auto ys = extensions(t.input, kExtensionBound);
        const auto us = enumerate_words(t.input, 0, kMismatchLen);
        std::vector<std::vector<UPWord>> images(us.size());
        for (std::size_t i = 0; i < us.size(); ++i)
            for (const auto& y : ys)
                if (auto r = eval_up_2way(t, up_concat(us[i], y)); r.output) images[i].push_back(*r.output);
        for (const auto& v : enumerate_words(t.output, 1, kMismatchLen)) {
            MismatchOracle exact(t, v, 12, kExtensionBound);
            o.require(exact.exact(), std::string(f) + " fell back to bounded search");
            for (std::size_t i = 0; i < us.size(); ++i) {
                ++queries;
                disagreements += exact.query(us[i]) != brute_mismatch(images[i], v);
            }
        }
        // the one-shot entry point answers like the prebuilt oracle
        for (const char* v : {"aa", "ab", "b"})
            for (const char* u : {"_", "a", "ab#"}) {
                Word uw = W(u);
                if (!t.input.contains(uw)) continue;
                o.require(mismatch_exists(t, uw, W(v)) == MismatchOracle(t, W(v), 12, kExtensionBound).query(uw),
                          "mismatch_exists entry point");
            }
    }
    o.require(disagreements == 0, std::to_string(disagreements) + " disagreements");
    o.note << queries << " queries, " << disagreements << " disagreements";
}

void criterion10(Outcome& o) {
    const Buchi ab = load("astar_bomega.buchi").buchi();
    o.require(member_up(closure(ab), U("(a)")), "closure(a*b^w) rejects (a)");
    Gen g(10);
    const auto xs = sample_up_words(Alphabet(kAB), 3, 3);
    std::size_t differing = 0;
    for (std::size_t i = 0; i < kClosureMachines; ++i) {
        const Buchi b = random_buchi(g, 4, kAB);
        const Buchi c = closure(b), cc = closure(c);
        for (const auto& x : xs) differing += member_up(c, x) != member_up(cc, x);
    }
    o.require(differing == 0, "closure not idempotent");
    std::vector<Buchi> machines{ab, load("b_infa.buchi").buchi(), load("b_finb.buchi").buchi()};
    for (int i = 0; i < 10; ++i) machines.push_back(random_buchi(g, 4, kAB));
    std::size_t words = 0, wrong = 0;
    for (const auto& b : machines) {
        const Nfa p = pref_automaton(b);
        const auto live = reference_live(b);
        for (const auto& w : enumerate_words(b.alphabet, 0, kPrefLength)) {
            ++words;
            wrong += p.accepts(w) != reference_in_pref(b, live, w);
        }
    }
    o.require(wrong == 0, "pref automaton disagrees");
    o.note << words << " prefix queries over " << machines.size() << " machines";
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
        {"fixture continuity verdicts", criterion1},
        {"exact evaluation", criterion2},
        {"look-ahead elimination", criterion3},
        {"pumping identity", criterion4},
        {"rho laws", criterion5},
        {"regular witness search", criterion6},
        {"differential law", criterion7},
        {"streaming", criterion8},
        {"mismatch oracle", criterion9},
        {"topology utilities", criterion10},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            criteria[i].second(o);
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        o.require(sec < kSecondsPerCriterion, "time budget exceeded");
        failed += !o.pass;
        std::printf("%s criterion %zu (%s): %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1,
                    criteria[i].first.c_str(), o.note.str().c_str(), sec);
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
