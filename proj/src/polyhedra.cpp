#include "stochinv/polyhedra.hpp"

#include <set>

namespace stochinv {

namespace {

std::set<int> varsOf(const Assertion& a, const AffineExpr* extra = nullptr) {
    std::set<int> vs;
    for (const auto& c : a)
        for (const auto& [v, coef] : c.expr.coeffs) vs.insert(v);
    if (extra)
        for (const auto& [v, coef] : extra->coeffs) vs.insert(v);
    return vs;
}

// Builds an LP over the assertion's variables (all free) and returns the
// var->column map.
std::map<int, int> addPointVars(LpProblem& lp, const std::set<int>& vs) {
    std::map<int, int> col;
    for (int v : vs) col[v] = lp.addVar("x" + std::to_string(v), false);
    return col;
}

SymLin toCols(const AffineExpr& e, const std::map<int, int>& col) {
    SymLin out;
    out.constant = e.constant;
    for (const auto& [v, c] : e.coeffs) out.setCoeff(col.at(v), c);
    return out;
}

} // namespace

bool satisfiableClosure(const Assertion& a) {
    LpProblem lp;
    auto col = addPointVars(lp, varsOf(a));
    for (const auto& c : a) lp.addRow(toCols(c.expr, col), Rel::Le);
    return lpSolve(lp).optimal();  // zero objective: feasibility test
}

StrictSatResult satisfiableStrict(const Assertion& a) {
    StrictSatResult res;
    LpProblem lp;
    auto col = addPointVars(lp, varsOf(a));
    int delta = lp.addVar("delta", true);
    bool anyStrict = false;
    for (const auto& c : a) {
        SymLin row = toCols(c.expr, col);
        if (c.strict) {
            row.setCoeff(delta, row.coeff(delta) + 1);  // expr + delta <= 0
            anyStrict = true;
        }
        lp.addRow(row, Rel::Le);
    }
    // maximize delta, capped at 1 so the LP stays bounded
    SymLin cap = SymLin::var(delta);
    cap.constant = -1;
    lp.addRow(cap, Rel::Le);
    lp.objective = -SymLin::var(delta);
    LpOutcome out = lpSolve(lp);
    if (!out.optimal()) return res;  // closure infeasible
    res.closureSatisfiable = true;
    Rat dv = out.assignment.back();
    if (!anyStrict || dv > 0) {
        res.satisfiable = true;
        std::vector<Rat> w;
        int maxVar = col.empty() ? 0 : col.rbegin()->first + 1;
        w.assign(static_cast<size_t>(maxVar), Rat(0));
        for (const auto& [v, j] : col) w[static_cast<size_t>(v)] = out.assignment[static_cast<size_t>(j)];
        res.witness = std::move(w);
    }
    return res;
}

MaxOutcome maximizeOverClosure(const AffineExpr& objective, const Assertion& premise) {
    MaxOutcome res;
    LpProblem lp;
    auto col = addPointVars(lp, varsOf(premise, &objective));
    for (const auto& c : premise) lp.addRow(toCols(c.expr, col), Rel::Le);
    SymLin obj = toCols(objective, col);
    lp.objective = -obj;  // maximize
    LpOutcome out = lpSolve(lp);
    switch (out.status) {
        case LpOutcome::Status::Infeasible:
            res.kind = MaxOutcome::Kind::Empty;
            return res;
        case LpOutcome::Status::Unbounded:
            res.kind = MaxOutcome::Kind::Unbounded;
            return res;
        case LpOutcome::Status::Optimal:
            break;
    }
    res.kind = MaxOutcome::Kind::Optimal;
    res.value = -out.value;
    int maxVar = col.empty() ? 0 : col.rbegin()->first + 1;
    res.argmax.assign(static_cast<size_t>(maxVar), Rat(0));
    for (const auto& [v, j] : col) res.argmax[static_cast<size_t>(v)] = out.assignment[static_cast<size_t>(j)];
    return res;
}

int LpBuilder::columnForSymbol(int symId) {
    auto it = symToCol_.find(symId);
    if (it != symToCol_.end()) return it->second;
    int c = problem_.addVar(syms_->name(symId), false);
    symToCol_.emplace(symId, c);
    return c;
}

int LpBuilder::freshMultiplier(const std::string& tag) {
    return problem_.addVar(tag, true);
}

SymLin LpBuilder::toColumns(const SymLin& overSymbols) {
    SymLin out;
    out.constant = overSymbols.constant;
    for (const auto& [s, c] : overSymbols.coeffs) out.setCoeff(columnForSymbol(s), c);
    return out;
}

void farkasRows(LpBuilder& lp, const Assertion& premise, const TemplateExpr& conclusion,
                const std::string& tag) {
    // premise rows: alpha_i' x + beta_i <= 0 (closed); conclusion: gamma' x + delta <= 0.
    // Emit: for each variable v, sum_i alpha_iv lambda_i - gamma_v == 0, and
    // delta - sum_i beta_i lambda_i <= 0, with lambda >= 0.
    std::vector<int> lambda;
    lambda.reserve(premise.size());
    for (size_t i = 0; i < premise.size(); ++i)
        lambda.push_back(lp.freshMultiplier("lam." + tag + "." + std::to_string(i)));

    std::set<int> vs;
    for (const auto& c : premise)
        for (const auto& [v, coef] : c.expr.coeffs) vs.insert(v);
    for (const auto& [v, s] : conclusion.coeffs) vs.insert(v);

    for (int v : vs) {
        SymLin row;
        for (size_t i = 0; i < premise.size(); ++i) {
            Rat a = premise[i].expr.coeff(v);
            if (a != 0) row.setCoeff(lambda[i], a);
        }
        row -= lp.toColumns(conclusion.coeff(v));
        lp.addRow(std::move(row), Rel::Eq);
    }
    SymLin constRow = lp.toColumns(conclusion.constant);
    for (size_t i = 0; i < premise.size(); ++i) {
        Rat b = premise[i].expr.constant;
        if (b != 0) constRow.setCoeff(lambda[i], constRow.coeff(lambda[i]) - b);
    }
    lp.addRow(std::move(constRow), Rel::Le);
}

bool entailsPlp(const Assertion& premise, const Plp& rhs) {
    Assertion closed = closure(premise);
    if (!satisfiableClosure(closed)) return true;  // vacuous
    if (rhs.isTrue()) return true;
    for (const auto& disjunct : rhs.disjuncts) {
        bool all = true;
        for (const auto& c : disjunct) {
            MaxOutcome mx = maximizeOverClosure(c.expr, closed);
            if (mx.kind == MaxOutcome::Kind::Empty) { all = true; break; }
            if (mx.kind == MaxOutcome::Kind::Unbounded || mx.value > 0 ||
                (c.strict && mx.value == 0))
            {
                all = false;
                break;
            }
        }
        if (all) return true;
    }
    return false;
}

} // namespace stochinv
