#pragma once

#include "stochinv/assertion.hpp"
#include "stochinv/dist.hpp"

#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace stochinv {

/// One interval of a nondeterministic-choice domain. Missing bounds mean the
/// side is unbounded. `integral` is recorded but relaxed to the real interval
/// during analysis.
struct SetInterval {
    bool integral = false;
    std::optional<Rat> lo, hi;
    bool operator==(const SetInterval& o) const {
        return integral == o.integral && lo == o.lo && hi == o.hi;
    }
};

/// Union of intervals, as written with `or` in ndet domains.
struct SetSpec {
    std::vector<SetInterval> intervals;
    bool operator==(const SetSpec& o) const { return intervals == o.intervals; }
};

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct Stmt {
    enum class Kind {
        Skip,
        AssignAffine,   // var := expr
        AssignSample,   // var := shift + sample(dist)
        AssignChoose,   // var := ndet(dom)
        Seq,            // a ; b
        IfGuard,        // if plp then a else b fi
        IfProb,         // if prob(p) then a else b fi
        IfStar,         // if * then a else b fi
        While,          // while plp do a od
    };
    Kind kind = Kind::Skip;
    int var = -1;          // assignment target
    AffineExpr expr;       // AssignAffine rhs / AssignSample shift
    std::string distId;    // AssignSample
    SetSpec dom;           // AssignChoose
    Plp guard;             // IfGuard / While
    Rat prob{0};           // IfProb
    StmtPtr a, b;
    int line = 0, col = 0;
};

bool stmtEquals(const Stmt* a, const Stmt* b);

struct Ast {
    VarTable vars;
    std::vector<std::pair<int, Rat>> preamble;  // (var, initial value) in source order
    StmtPtr body;                               // null for preamble-only programs
    DistRegistry dists;
};

/// Structural equality of preamble and body (registry contents follow from
/// the body, so they are not compared).
bool astEquals(const Ast& x, const Ast& y);

std::string prettyPrint(const Ast& ast);

} // namespace stochinv
