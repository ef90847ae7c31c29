#include "helpers.hpp"

using namespace testutil;
using namespace stochinv;

TEST_CASE("parsing the asymmetric-walk program") {
    Ast ast = parseProgram(slurpData("fig2.app"));
    REQUIRE(ast.preamble.size() == 1);
    CHECK(ast.vars.name(ast.preamble[0].first) == "x");
    CHECK(ast.preamble[0].second == 10);
    REQUIRE(ast.body);
    CHECK(ast.body->kind == Stmt::Kind::While);
    // guard x >= 1
    CHECK(ast.body->guard.disjuncts.size() == 1);
    const Stmt* branch = ast.body->a.get();
    REQUIRE(branch->kind == Stmt::Kind::IfProb);
    CHECK(branch->prob == Rat(3, 4));
    CHECK(branch->a->kind == Stmt::Kind::AssignAffine);
    CHECK(branch->a->expr == exprOf("x - 1", const_cast<VarTable&>(ast.vars)));
    CHECK(branch->b->expr.eval({Rat(5)}) == 6);
}

TEST_CASE("preamble-only program has an empty body") {
    Ast ast = parseProgram("x := 0");
    CHECK(ast.preamble.size() == 1);
    CHECK(ast.body == nullptr);
}

TEST_CASE("body variables must be initialized in the preamble") {
    CHECK_THROWS_AS(parseProgram("x := 0\nwhile x >= 0 do x := x + y od"), UninitializedVariableError);
    try {
        parseProgram("x := 0\nwhile x >= 0 do x := x + y od");
    } catch (const UninitializedVariableError& e) {
        CHECK(e.name == "y");
    }
    CHECK_THROWS_AS(parseProgram("x := 0\nx := 1\nwhile x >= 0 do x := x - 1 od"), SyntaxError);
}

TEST_CASE("probability literals are checked and exact") {
    CHECK_THROWS_AS(parseProgram("x := 0\nif prob(1.5) then skip else skip fi"), SyntaxError);
    Ast ast = parseProgram("x := 0\nif prob(0.125) then x := 1 else x := 2 fi");
    CHECK(ast.body->prob == Rat(1, 8));
}

TEST_CASE("sampling with an additive shift and nondeterministic assignment") {
    Ast ast = parseProgram("x := 0\nx := x + sample(uniform(-2, 1))\nx := ndet(real[0,1] or int[3,5])");
    const Stmt* s1 = ast.body->a.get();
    CHECK(s1->kind == Stmt::Kind::AssignSample);
    CHECK(s1->distId == "uniform(-2,1)");
    CHECK(s1->expr == AffineExpr::var(0));
    const Stmt* s2 = ast.body->b.get();
    REQUIRE(s2->kind == Stmt::Kind::AssignChoose);
    REQUIRE(s2->dom.intervals.size() == 2);
    CHECK(!s2->dom.intervals[0].integral);
    CHECK(s2->dom.intervals[1].integral);
    CHECK(*s2->dom.intervals[1].lo == 3);

    CHECK_THROWS_AS(parseProgram("x := 0\nx := 2 * sample(uniform(0,1))"), SyntaxError);
    CHECK_THROWS_AS(parseProgram("x := 0\nx := x - sample(uniform(0,1))"), SyntaxError);
}

TEST_CASE("builtin distributions") {
    DistributionSpec u = builtinDistribution("uniform", {Rat(-2), Rat(1)});
    CHECK(u.mean == Rat(-1, 2));
    CHECK(u.support.holdsAt({Rat(0)}));
    CHECK(!u.support.holdsAt({Rat(2)}));
    CHECK(u.meanInsideHull());

    DistributionSpec d = builtinDistribution("dirac", {Rat(5)});
    CHECK(d.mean == 5);
    CHECK(d.support.holdsAt({Rat(5)}));
    CHECK(!d.support.holdsAt({Rat(4)}));

    DistributionSpec b = builtinDistribution("bernoulli", {Rat(3, 4)});
    CHECK(b.mean == Rat(3, 4));
    CHECK(b.support.disjuncts.size() == 2);
    CHECK(b.support.holdsAt({Rat(0)}));
    CHECK(b.support.holdsAt({Rat(1)}));
    CHECK(!b.support.holdsAt({Rat(1, 2)}));
    CHECK(b.meanInsideHull());  // mean in the convex hull of a two-point support

    CHECK_THROWS_AS(builtinDistribution("poisson", {Rat(1)}), UnknownDistributionError);
    CHECK_THROWS_AS(builtinDistribution("uniform", {Rat(2), Rat(1)}), InvalidParametersError);
    CHECK_THROWS_AS(builtinDistribution("bernoulli", {Rat(2)}), InvalidParametersError);
}

TEST_CASE("pretty-print round trip over the program corpus") {
    for (const char* name : {"fig1.app", "fig2.app", "fig3.app", "fig4.app", "exa.app", "exb.app", "exc.app"}) {
        Ast ast = parseProgram(slurpData(name));
        std::string printed = prettyPrint(ast);
        Ast again = parseProgram(printed);
        CHECK_MESSAGE(astEquals(ast, again), "round trip failed for ", name, ":\n", printed);
    }
}

TEST_CASE("decimal literals in the corpus are exact rationals") {
    Ast ast = parseProgram(slurpData("exc.app"));
    // collect the 0.1 / 0.2 increments
    bool found01 = false, found02 = false;
    std::function<void(const Stmt*)> walk = [&](const Stmt* s) {
        if (!s) return;
        if (s->kind == Stmt::Kind::AssignAffine) {
            if (s->expr.constant == Rat(1, 10)) found01 = true;
            if (s->expr.constant == Rat(1, 5)) found02 = true;
        }
        walk(s->a.get());
        walk(s->b.get());
    };
    walk(ast.body.get());
    CHECK(found01);
    CHECK(found02);
}

TEST_CASE("unicode operators from the literature are accepted") {
    Ast ast = parseProgram("x := 10\nwhile x \xE2\x89\xA5 1 do x := x \xE2\x88\x92 1 od");
    CHECK(ast.body->kind == Stmt::Kind::While);
    Ast star = parseProgram("x := 0\nif \xE2\x8B\x86 then x := 1 else x := 2 fi");
    CHECK(star.body->kind == Stmt::Kind::IfStar);
}

TEST_CASE("certificates must cover every location") {
    Pcfg p = parsePcfgFile(slurpData("fig4_collapsed.pcfg"));
    std::string partial = "kind repsm\neps 1\nc 13\nm0 -3429\neta l0 = 7*x - 3499\n";
    CHECK_THROWS_AS(parseCertificate(partial, p), FormatError);
    std::string badC = slurpData("fig4_c13.cert");
    auto pos = badC.find("c 13");
    badC.replace(pos, 4, "c 0.5");  // below eps
    CHECK_THROWS_AS(parseCertificate(badC, p), FormatError);
}

TEST_CASE("syntax errors carry positions") {
    try {
        parseProgram("x := 10\nwhile x >= 1 do\n  x := * 3\nod");
        FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
        CHECK(e.line == 3);
    }
}
