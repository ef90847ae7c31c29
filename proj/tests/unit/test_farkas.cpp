#include "helpers.hpp"

#include <random>

using namespace testutil;
using namespace stochinv;

TEST_CASE("satisfiability with strict constraints") {
    VarTable vars;
    CHECK(!satisfiableStrict(assertionOf("x <= 0 and x >= 1", vars)).closureSatisfiable);
    CHECK(satisfiableStrict(assertionOf("not (x <= 5)", vars)).satisfiable);
    SUBCASE("strictly empty but closure-satisfiable") {
        StrictSatResult r = satisfiableStrict(assertionOf("x >= 0 and not (x >= 0)", vars));
        CHECK(r.closureSatisfiable);
        CHECK(!r.satisfiable);
    }
    SUBCASE("witness satisfies the strict system") {
        Assertion a = assertionOf("x >= 1 and not (x >= 3) and y <= 2", vars);
        StrictSatResult r = satisfiableStrict(a);
        REQUIRE(r.satisfiable);
        CHECK(assertionHoldsAt(a, r.witness));
    }
}

TEST_CASE("maximize over closure") {
    VarTable vars;
    AffineExpr x = exprOf("x", vars);
    MaxOutcome m = maximizeOverClosure(x, closure(assertionOf("x <= 7 and x >= -1", vars)));
    REQUIRE(m.kind == MaxOutcome::Kind::Optimal);
    CHECK(m.value == 7);
    CHECK(m.argmax[0] == 7);
    CHECK(maximizeOverClosure(x, closure(assertionOf("x >= 0", vars))).kind == MaxOutcome::Kind::Unbounded);
    CHECK(maximizeOverClosure(x, closure(assertionOf("x <= 0 and x >= 1", vars))).kind ==
          MaxOutcome::Kind::Empty);
}

namespace {

// Assembles the Farkas rows for one implication and solves for multipliers
// (plus any unknowns), returning the assignment.
struct FarkasProbe {
    SymbolTable syms;
    LpBuilder lp{syms};
    std::optional<LpOutcome> solve(const Assertion& premise, const TemplateExpr& conclusion) {
        farkasRows(lp, closure(premise), conclusion, "t");
        LpOutcome out = lpSolve(lp.problem());
        if (!out.optimal()) return std::nullopt;
        return out;
    }
};

} // namespace

TEST_CASE("farkas rows: weakening with a single multiplier") {
    VarTable vars;
    // premise -x <= 0, conclusion -x <= 1: lambda = 1 works
    Assertion premise = assertionOf("x >= 0", vars);
    TemplateExpr concl(exprOf("-x - 1", vars));  // -x - 1 <= 0
    FarkasProbe probe;
    auto out = probe.solve(premise, concl);
    REQUIRE(out.has_value());
    // one multiplier, value 1: coefficients must match exactly
    REQUIRE(out->assignment.size() == 1);
    CHECK(out->assignment[0] == 1);
}

TEST_CASE("farkas rows: bounded premise") {
    VarTable vars;
    // premise {x <= 1, -x <= 0}, conclusion 2x <= 3: lambda = (2, 0)
    Assertion premise = assertionOf("x <= 1 and x >= 0", vars);
    TemplateExpr concl(exprOf("2*x - 3", vars));
    FarkasProbe probe;
    auto out = probe.solve(premise, concl);
    REQUIRE(out.has_value());
    REQUIRE(out->assignment.size() == 2);
    // lambda1 - lambda2 = 2 and lambda1 <= 3
    CHECK(out->assignment[0] - out->assignment[1] == 2);
    CHECK(out->assignment[0] <= 3);
}

TEST_CASE("farkas rows: shape with unknowns") {
    VarTable vars;
    vars.intern("x");
    SymbolTable syms;
    LpBuilder lp(syms);
    int a = syms.intern("a"), b = syms.intern("b");
    int colA = lp.columnForSymbol(a), colB = lp.columnForSymbol(b);
    // premise {x <= 1, -x <= 0}, conclusion a*x - b <= 0:
    // rows: lam1 - lam2 - a == 0 and -b - lam1*(-1) ... i.e. lam1 <= b
    TemplateExpr concl;
    concl.setCoeff(0, SymLin::var(a));
    concl.constant = -SymLin::var(b);
    Assertion premise = assertionOf("x <= 1 and x >= 0", vars);
    farkasRows(lp, closure(premise), concl, "t");
    const LpProblem& prob = lp.problem();
    REQUIRE(prob.rows.size() == 2);
    // fix a = 5: then lam1 - lam2 = 5 and b >= lam1 >= 5
    LpProblem solveIt = prob;
    SymLin fixA = SymLin::var(colA);
    fixA.constant = -5;
    solveIt.addRow(fixA, Rel::Eq);
    solveIt.objective = SymLin::var(colB);  // minimize b
    LpOutcome out = lpSolve(solveIt);
    REQUIRE(out.optimal());
    CHECK(out.value == 5);
}

TEST_CASE("farkas soundness on sampled points") {
    // For random premises and conclusions solvable by the LP layer, the
    // instantiated implication holds at sampled rational points of the
    // premise polytope, exactly.
    std::mt19937_64 rng(99);
    VarTable vars;
    vars.intern("x");
    vars.intern("y");
    int accepted = 0;
    while (accepted < 20) {
        auto coef = [&]() { return Rat(static_cast<int>(rng() % 9) - 4); };
        Assertion premise;
        // box plus two random rows keeps sampling easy
        premise.push_back(LinearConstraint{AffineExpr::var(0) - AffineExpr(Rat(8)), false});
        premise.push_back(LinearConstraint{-AffineExpr::var(0) - AffineExpr(Rat(8)), false});
        premise.push_back(LinearConstraint{AffineExpr::var(1) - AffineExpr(Rat(8)), false});
        premise.push_back(LinearConstraint{-AffineExpr::var(1) - AffineExpr(Rat(8)), false});
        for (int r = 0; r < 2; ++r) {
            AffineExpr e = AffineExpr::var(0) * coef() + AffineExpr::var(1) * coef() + AffineExpr(coef());
            premise.push_back(LinearConstraint{e, false});
        }
        if (!satisfiableClosure(premise)) continue;
        // conclusion: maximize a random objective over the premise, then
        // require obj <= max (valid by construction)
        AffineExpr obj = AffineExpr::var(0) * coef() + AffineExpr::var(1) * coef();
        MaxOutcome mx = maximizeOverClosure(obj, premise);
        if (mx.kind != MaxOutcome::Kind::Optimal) continue;
        TemplateExpr concl(obj - AffineExpr(mx.value));
        FarkasProbe probe;
        auto out = probe.solve(premise, concl);
        REQUIRE_MESSAGE(out.has_value(), "Farkas system should be solvable for a valid implication");
        ++accepted;

        // sample points of the premise box, exact check
        for (int s = 0; s < 500; ++s) {
            std::vector<Rat> pt{Rat(static_cast<int>(rng() % 33) - 16, 2), Rat(static_cast<int>(rng() % 33) - 16, 2)};
            if (!assertionHoldsAt(premise, pt)) continue;
            CHECK(concl.toAffine().eval(pt) <= 0);
        }
    }
}

TEST_CASE("closure relaxation only enlarges the premise") {
    VarTable vars;
    Assertion strict = assertionOf("not (x <= 0) and x <= 4", vars);
    Assertion closed = closure(strict);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 1000; ++i) {
        std::vector<Rat> pt{Rat(static_cast<int>(rng() % 17) - 8, 2)};
        if (assertionHoldsAt(strict, pt)) CHECK(assertionHoldsAt(closed, pt));
    }
}

TEST_CASE("entailment via the LP layer") {
    VarTable vars;
    Plp rhs = plpOf("x >= 0", vars);
    CHECK(entailsPlp(assertionOf("x >= 1 and x <= 5", vars), rhs));
    CHECK(!entailsPlp(assertionOf("x >= -1", vars), rhs));
    CHECK(entailsPlp(assertionOf("x >= 1 and x <= 0", vars), rhs));  // vacuous
    CHECK(entailsPlp(assertionOf("x >= 1", vars), Plp::top()));
}
