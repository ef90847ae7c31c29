#include "helpers.hpp"

using namespace testutil;
using namespace stochinv;

namespace {

int countKind(const Pcfg& p, LocKind k) {
    int n = 0;
    for (const auto& l : p.locations) n += l.kind == k;
    return n;
}

} // namespace

TEST_CASE("construction: location and transition counts for the corpus") {
    struct Golden {
        const char* file;
        int locations, transitions, prob, nondet;
    };
    // hand-derived by applying the construction rules
    const Golden golden[] = {
        {"fig1.app", 5, 7, 0, 0}, {"fig2.app", 5, 7, 1, 0},  {"fig3.app", 6, 8, 0, 0},
        {"fig4.app", 5, 7, 1, 0}, {"exa.app", 9, 13, 2, 0},  {"exb.app", 11, 16, 3, 0},
        {"exc.app", 11, 15, 3, 0},
    };
    for (const auto& g : golden) {
        Pcfg p = buildPcfg(parseProgram(slurpData(g.file)));
        CHECK_MESSAGE(p.numLocations() == g.locations, g.file, " locations");
        CHECK_MESSAGE(static_cast<int>(p.transitions.size()) == g.transitions, g.file, " transitions");
        CHECK_MESSAGE(countKind(p, LocKind::Prob) == g.prob, g.file, " prob locations");
        CHECK_MESSAGE(countKind(p, LocKind::Nondet) == g.nondet, g.file, " nondet locations");
        auto diags = validatePcfg(p);
        CHECK_MESSAGE(diags.empty(), g.file, " produced ", diags.size(), " diagnostics",
                      diags.empty() ? "" : (": " + diags[0].message));
    }
}

TEST_CASE("construction details of the asymmetric walk") {
    Pcfg p = buildPcfg(parseProgram(slurpData("fig2.app")));
    // initial location is the while head; terminal carries the self-loop
    CHECK(p.initLoc == 0);
    CHECK(p.initVal == std::vector<Rat>{Rat(10)});
    int terminal = -1;
    for (int l = 0; l < p.numLocations(); ++l)
        if (p.isTerminal(l)) terminal = l;
    REQUIRE(terminal >= 0);
    bool selfLoop = false;
    for (const auto& t : p.transitions)
        if (t.source == terminal && t.target == terminal) selfLoop = true;
    CHECK(selfLoop);
    // branch probabilities 3/4, 1/4
    std::vector<Rat> probs;
    for (const auto& t : p.transitions)
        if (t.prob) probs.push_back(*t.prob);
    REQUIRE(probs.size() == 2);
    CHECK(probs[0] + probs[1] == 1);
    CHECK((probs[0] == Rat(3, 4) || probs[1] == Rat(3, 4)));
    // only det locations carry updates
    for (const auto& t : p.transitions)
        if (p.locations[static_cast<size_t>(t.source)].kind != LocKind::Det)
            CHECK(t.update.kind == Update::Kind::Identity);
}

TEST_CASE("construction: skip program and preamble-only program") {
    Pcfg skip = buildPcfg(parseProgram("x := 0\nskip"));
    CHECK(skip.numLocations() == 2);
    CHECK(skip.transitions.size() == 2);  // in->out plus the terminal self-loop
    Pcfg pre = buildPcfg(parseProgram("x := 0"));
    CHECK(pre.numLocations() == 1);
    CHECK(pre.isTerminal(0));
}

TEST_CASE("construction: branch guards split into complementary halves") {
    Pcfg p = buildPcfg(parseProgram(slurpData("fig4.app")));
    // while head: guards x >= 0 and not(x >= 0)
    auto outs = p.outgoing(p.initLoc);
    REQUIRE(outs.size() == 2);
    const Plp& g0 = *p.transitions[static_cast<size_t>(outs[0])].guard;
    const Plp& g1 = *p.transitions[static_cast<size_t>(outs[1])].guard;
    CHECK(g0.holdsAt({Rat(0)}) != g1.holdsAt({Rat(0)}));
    CHECK(g0.holdsAt({Rat(-1)}) != g1.holdsAt({Rat(-1)}));
}

TEST_CASE("parsing the collapsed graphs from the figures") {
    Pcfg f2 = loadPcfg("fig2_collapsed.pcfg");
    CHECK(f2.numLocations() == 3);
    CHECK(f2.transitions.size() == 5);
    CHECK(f2.locations[1].kind == LocKind::Prob);
    CHECK(validatePcfg(f2).empty());

    Pcfg f4 = loadPcfg("fig4_collapsed.pcfg");
    CHECK(f4.numLocations() == 3);
    CHECK(validatePcfg(f4).empty());

    Pcfg f3 = loadPcfg("fig3_collapsed.pcfg");
    CHECK(f3.numLocations() == 5);
    CHECK(validatePcfg(f3).empty());
    // the sampled x-update keeps its additive shift
    bool foundShift = false;
    for (const auto& t : f3.transitions)
        if (t.update.kind == Update::Kind::Sample && t.update.expr == AffineExpr::var(0)) foundShift = true;
    CHECK(foundShift);
}

TEST_CASE("pcfg file errors") {
    std::string base = slurpData("fig2_collapsed.pcfg");
    // probabilities summing to 3/4
    std::string bad = base;
    auto pos = bad.find("prob 0.25");
    bad.replace(pos, 9, "prob 0");
    CHECK_THROWS_AS(parsePcfgFile(bad), ProbSumNotOneError);

    CHECK_THROWS_AS(parsePcfgFile("vars x\nloc l0 det\ninit l0 0\nedge l0 l1 var x update id"),
                    DanglingLocationError);
    CHECK_THROWS_AS(parsePcfgFile("vars x\nloc l0 det\nloc l1 det\ninit l0 0\n"
                                  "edge l0 l1 var x update id\nedge l1 l0 var x update id prob 0.5"),
                    FormatError);
    CHECK_THROWS_AS(parsePcfgFile("vars x\ninit l0 0"), FormatError);
}

TEST_CASE("validation: guard overlap and exhaustiveness diagnostics") {
    // overlapping guards x >= 0 and x >= -1
    Pcfg p = parsePcfgFile(
        "vars x\nloc l0 det\nloc l1 det terminal\ninit l0 0\n"
        "edge l0 l1 var x update id guard x >= 0\n"
        "edge l0 l1 var x update id guard x >= -1\n"
        "edge l1 l1 var x update id\n");
    auto diags = validatePcfg(p);
    bool overlap = false, gap = false;
    for (const auto& d : diags) {
        if (d.invariantName == "guard-exclusive") overlap = true;
        if (d.invariantName == "guard-exhaustive") gap = true;
    }
    CHECK(overlap);
    CHECK(gap);  // x < -1 is uncovered

    // single guard x >= 0: exhaustiveness diagnostic
    Pcfg q = parsePcfgFile(
        "vars x\nloc l0 det\nloc l1 det terminal\ninit l0 0\n"
        "edge l0 l1 var x update id guard x >= 0\n"
        "edge l1 l1 var x update id\n");
    diags = validatePcfg(q);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].invariantName == "guard-exhaustive");

    // complementary halves share only a strict boundary: clean
    Pcfg r = loadPcfg("fig2_collapsed.pcfg");
    CHECK(validatePcfg(r).empty());

    // a boundary point covered twice by non-strict guards is a real overlap
    Pcfg s = parsePcfgFile(
        "vars x\nloc l0 det\nloc l1 det terminal\ninit l0 0\n"
        "edge l0 l1 var x update id guard x >= 0\n"
        "edge l0 l1 var x update id guard not (x >= 0)\n"
        "edge l0 l1 var x update id guard x >= 0 and x <= 0\n"
        "edge l1 l1 var x update id\n");
    diags = validatePcfg(s);
    bool hardOverlap = false;
    for (const auto& d : diags)
        if (d.invariantName == "guard-exclusive") hardOverlap = true;
    CHECK(hardOverlap);
}

TEST_CASE("print-parse round trip for built graphs") {
    for (const char* name : {"fig2.app", "exa.app", "exc.app"}) {
        Pcfg p = buildPcfg(parseProgram(slurpData(name)));
        Pcfg q = parsePcfgFile(printPcfg(p));
        CHECK(q.numLocations() == p.numLocations());
        CHECK(q.transitions.size() == p.transitions.size());
        CHECK(q.initVal == p.initVal);
        CHECK(validatePcfg(q).empty());
    }
}

TEST_CASE("distribution mean must lie in the support hull") {
    CHECK_THROWS_AS(parsePcfgFile("vars x\nloc l0 det terminal\ninit l0 0\n"
                                  "dist d1 mean 5 support x >= 0 and x <= 1\n"
                                  "edge l0 l0 var x update id\n"),
                    FormatError);
    Pcfg ok = parsePcfgFile("vars x\nloc l0 det terminal\ninit l0 0\n"
                            "dist d1 mean 0.5 support x >= 0 and x <= 1\n"
                            "edge l0 l0 var x update sample d1\n");
    CHECK(ok.dists.has("d1"));
}
