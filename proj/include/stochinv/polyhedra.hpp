#pragma once

#include "stochinv/assertion.hpp"
#include "stochinv/lp.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace stochinv {

/// Satisfiability of the closure (strict constraints relaxed to non-strict).
bool satisfiableClosure(const Assertion& a);

struct StrictSatResult {
    bool satisfiable = false;      // as written, strict constraints respected
    bool closureSatisfiable = false;
    std::vector<Rat> witness;      // only when satisfiable
};

/// Satisfiability of a mixed strict/non-strict system, decided by maximizing
/// an auxiliary margin variable on the strict rows.
StrictSatResult satisfiableStrict(const Assertion& a);

struct MaxOutcome {
    enum class Kind { Optimal, Unbounded, Empty };
    Kind kind = Kind::Empty;
    Rat value{0};
    std::vector<Rat> argmax;
};

/// Exact maximum of an affine objective over the closure of an assertion.
MaxOutcome maximizeOverClosure(const AffineExpr& objective, const Assertion& premise);

/// One emitted Farkas row, linear in template unknowns and multipliers.
struct FarkasRow {
    SymLin expr;  // over LP variable ids managed by the caller's builder
    Rel rel;
};

/// Shared builder mapping template-unknown symbol ids to LP columns and
/// allocating fresh nonnegative multiplier columns.
class LpBuilder {
public:
    explicit LpBuilder(SymbolTable& syms) : syms_(&syms) {}

    /// LP column for a template symbol (free variable), created on demand.
    int columnForSymbol(int symId);
    int freshMultiplier(const std::string& tag);
    void addRow(SymLin expr, Rel rel) { problem_.addRow(std::move(expr), rel); }

    /// Translates a SymLin over symbol ids into one over LP columns.
    SymLin toColumns(const SymLin& overSymbols);

    LpProblem& problem() { return problem_; }
    const LpProblem& problem() const { return problem_; }
    int columnCount() const { return problem_.numVars(); }
    const SymbolTable& symbols() const { return *syms_; }

private:
    SymbolTable* syms_;
    LpProblem problem_;
    std::map<int, int> symToCol_;
};

/// Farkas encoding of `premise (closed) implies conclusion <= 0` where the
/// conclusion is affine in program variables with coefficients linear in the
/// template unknowns. Appends one fresh multiplier per premise row, one
/// equality row per program variable, and one inequality row for the
/// constant part. Any solution of the emitted rows instantiates a pointwise
/// valid implication.
void farkasRows(LpBuilder& lp, const Assertion& premise, const TemplateExpr& conclusion,
                const std::string& tag);

/// True iff `premise` (an assertion, taken over its closure) entails each
/// constraint of every disjunct choice of `rhs`; sound and complete for
/// polyhedral rhs, sound for disjunctive rhs (some disjunct must be entailed).
bool entailsPlp(const Assertion& premise, const Plp& rhs);

} // namespace stochinv
