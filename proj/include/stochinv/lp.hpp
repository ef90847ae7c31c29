#pragma once

#include "stochinv/errors.hpp"
#include "stochinv/linexpr.hpp"

#include <string>
#include <vector>

namespace stochinv {

enum class Rel { Le, Eq };

/// Exact-rational linear program. Variables are either nonnegative or free;
/// rows constrain `expr <= 0` or `expr == 0`; the objective is minimized.
struct LpProblem {
    struct Row {
        SymLin expr;
        Rel rel;
    };
    std::vector<std::string> varNames;
    std::vector<bool> varNonneg;
    std::vector<Row> rows;
    SymLin objective;
    size_t cellCap = 80'000'000;  // rows x columns limit for the tableau

    int addVar(const std::string& name, bool nonneg) {
        varNames.push_back(name);
        varNonneg.push_back(nonneg);
        return static_cast<int>(varNames.size()) - 1;
    }
    void addRow(SymLin e, Rel r) { rows.push_back(Row{std::move(e), r}); }
    int numVars() const { return static_cast<int>(varNames.size()); }
};

struct LpOutcome {
    enum class Status { Optimal, Infeasible, Unbounded };
    Status status = Status::Infeasible;
    Rat value{0};
    std::vector<Rat> assignment;

    bool optimal() const { return status == Status::Optimal; }
};

/// Two-phase primal simplex over exact rationals with Bland's rule.
/// Deterministic: identical problems yield identical outcomes.
LpOutcome lpSolve(const LpProblem& problem);

/// Plain-text dump `min c'y s.t. rows` for debugging.
std::string lpDump(const LpProblem& problem);

} // namespace stochinv
