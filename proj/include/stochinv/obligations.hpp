#pragma once

#include "stochinv/certificates.hpp"
#include "stochinv/polyhedra.hpp"

#include <optional>
#include <string>
#include <vector>

namespace stochinv {

/// Premise row `e <= 0` (or `< 0`) whose coefficients may involve template
/// unknowns (they are concrete everywhere except in the quadratic export).
struct TRow {
    TemplateExpr e;
    bool strict = false;

    static TRow concrete(const LinearConstraint& c) { return TRow{TemplateExpr(c.expr), c.strict}; }
    bool isConcrete() const { return e.isConcrete(); }
    LinearConstraint toConstraint() const { return LinearConstraint{e.toAffine(), strict}; }
};

/// One proof obligation: `premise` (conjunction, universally quantified over
/// the extended variables) implies `conclusion <= 0`.
struct Obligation {
    enum class Kind { NonNeg, Decrease, DiffBound, Sign };
    Kind kind = Kind::NonNeg;
    int loc = -1;
    int transIdx = -1;
    std::string label;
    std::vector<TRow> premise;
    TemplateExpr conclusion;
    int numExtVars = 0;                    // program vars + fresh universals
    std::vector<std::string> freshNames;   // extended vars beyond the program's

    bool premiseConcrete() const {
        for (const auto& r : premise)
            if (!r.isConcrete()) return false;
        return true;
    }
    Assertion premiseAssertion() const {
        Assertion a;
        a.reserve(premise.size());
        for (const auto& r : premise) a.push_back(r.toConstraint());
        return a;
    }
};

const char* obligationKindName(Obligation::Kind k);

/// Symbolic-capable per-location predicate: list of disjuncts of TRows.
using TPred = std::vector<std::vector<TRow>>;

struct TPredMap {
    std::vector<TPred> at;  // indexed by location

    static TPredMap fromPredMap(const PredMap& m, const Pcfg& p);
    const TPred& operator()(int loc) const { return at[static_cast<size_t>(loc)]; }
};

struct ObligationGenOptions {
    CertKind mode = CertKind::RepSm;
    bool dropVacuous = true;   // drop concrete premises with unsatisfiable closure
    bool diffBounds = true;
};

/// Generates the full obligation set for an expression map candidate:
///  - nonnegativity of eta on the supporting map intersected with the target
///    set (RepSM) or its complement (RSM), at every location;
///  - expected decrease by eps outside the target set, at every non-terminal
///    location for RepSM and at every location for RSM;
///  - two-sided difference bounds |eta(l,x) - eta(l',x')| <= c per transition
///    under the supporting map and guard, with sampled values universally
///    quantified over the support predicate and choose sets expanded to
///    endpoint plus sign obligations.
std::vector<Obligation> generateObligations(const Pcfg& p, const std::vector<TemplateExpr>& etas,
                                            const TPredMap& invariant, const TPredMap& target,
                                            const TPredMap& notTarget, const TemplateExpr& eps,
                                            const TemplateExpr& cBound,
                                            const ObligationGenOptions& opts);

/// Per-location decrease/value obligations for one location (the building
/// block of the full generator), exposed for inspection and tests. `mode`
/// selects the premise placement; "value-only" conclusions omit the -eps.
enum class PreexpMode { RsmDecrease, RepSmDecrease, ValueOnly };
std::vector<Obligation> preexpObligations(const Pcfg& p, const std::vector<TemplateExpr>& etas,
                                          int loc, const std::vector<TRow>& premiseBase,
                                          const TemplateExpr& eps, PreexpMode mode);

struct PreexpValue {
    bool defined = false;    // false when a choose set is unbounded in the
                             // relevant direction
    Rat value{0};
};

/// Exact numeric pre-expectation of a concrete expression map at a
/// configuration: weighted sum at probabilistic locations, maximum over
/// successors at nondeterministic ones, the unique enabled branch at
/// deterministic ones (distribution updates contribute their expected value,
/// choose updates their supremum). Throws GuardGapError when no guard is
/// enabled.
PreexpValue preexpValue(const Pcfg& p, const ExprMap& eta, int loc, const std::vector<Rat>& x);

} // namespace stochinv
