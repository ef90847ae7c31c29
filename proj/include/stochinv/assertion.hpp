#pragma once

#include "stochinv/errors.hpp"
#include "stochinv/linexpr.hpp"

#include <memory>
#include <string>
#include <vector>

namespace stochinv {

/// Ordered list of variable names; index order fixes variable indices.
class VarTable {
public:
    int intern(const std::string& name) {
        for (size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return static_cast<int>(i);
        names_.push_back(name);
        return static_cast<int>(names_.size()) - 1;
    }
    int find(const std::string& name) const {
        for (size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return static_cast<int>(i);
        return -1;
    }
    const std::string& name(int i) const { return names_.at(static_cast<size_t>(i)); }
    int size() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& names() const { return names_; }

private:
    std::vector<std::string> names_;
};

/// Normalized linear constraint: `expr <= 0`, or `expr < 0` when strict.
struct LinearConstraint {
    AffineExpr expr;
    bool strict = false;

    bool holdsAt(const std::vector<Rat>& point) const {
        Rat v = expr.eval(point);
        return strict ? v < 0 : v <= 0;
    }
    LinearConstraint negated() const { return LinearConstraint{-expr, !strict}; }
    LinearConstraint closed() const { return LinearConstraint{expr, false}; }
    bool operator==(const LinearConstraint& o) const { return strict == o.strict && expr == o.expr; }
};

/// Conjunction of linear constraints.
using Assertion = std::vector<LinearConstraint>;

inline Assertion closure(const Assertion& a) {
    Assertion out;
    out.reserve(a.size());
    for (const auto& c : a) out.push_back(c.closed());
    return out;
}

inline bool assertionHoldsAt(const Assertion& a, const std::vector<Rat>& point) {
    for (const auto& c : a)
        if (!c.holdsAt(point)) return false;
    return true;
}

/// Propositionally linear predicate in disjunctive normal form. An empty
/// disjunct list denotes `false`; a single empty assertion denotes `true`.
struct Plp {
    std::vector<Assertion> disjuncts;

    static Plp top() { return Plp{{Assertion{}}}; }
    static Plp bottom() { return Plp{}; }
    static Plp single(Assertion a) { return Plp{{std::move(a)}}; }

    bool isTrue() const { return disjuncts.size() == 1 && disjuncts[0].empty(); }
    bool isFalse() const { return disjuncts.empty(); }
    bool isPolyhedral() const { return disjuncts.size() <= 1; }

    bool holdsAt(const std::vector<Rat>& point) const {
        for (const auto& d : disjuncts)
            if (assertionHoldsAt(d, point)) return true;
        return false;
    }
    bool operator==(const Plp& o) const { return disjuncts == o.disjuncts; }
};

/// Boolean formula over linear constraints, the parse-level representation
/// before DNF conversion.
struct Formula {
    enum class Kind { True, False, Atom, Not, And, Or };
    Kind kind = Kind::True;
    LinearConstraint atom;  // Kind::Atom
    std::vector<Formula> children;

    static Formula mkTrue() { return Formula{}; }
    static Formula mkFalse() { Formula f; f.kind = Kind::False; return f; }
    static Formula mkAtom(LinearConstraint c) {
        Formula f;
        f.kind = Kind::Atom;
        f.atom = std::move(c);
        return f;
    }
    static Formula mkNot(Formula a) {
        Formula f;
        f.kind = Kind::Not;
        f.children.push_back(std::move(a));
        return f;
    }
    static Formula mkAnd(Formula a, Formula b) {
        Formula f;
        f.kind = Kind::And;
        f.children.push_back(std::move(a));
        f.children.push_back(std::move(b));
        return f;
    }
    static Formula mkOr(Formula a, Formula b) {
        Formula f;
        f.kind = Kind::Or;
        f.children.push_back(std::move(a));
        f.children.push_back(std::move(b));
        return f;
    }
};

inline constexpr size_t kDefaultDnfCap = 256;

/// DNF conversion with a disjunct-count cap; throws BlowupLimitError.
Plp toDnf(const Formula& f, size_t cap = kDefaultDnfCap);

/// Complement of a DNF predicate, again in DNF (De Morgan + distribution,
/// negation of non-strict constraints yields strict ones).
Plp negatePlp(const Plp& p, size_t cap = kDefaultDnfCap);

/// Conjunction of two DNF predicates (pairwise product of disjuncts).
Plp andPlp(const Plp& a, const Plp& b, size_t cap = kDefaultDnfCap);

/// Canonically scales a constraint so structurally equal constraints compare
/// equal: the first nonzero coefficient (or the constant) has magnitude 1.
LinearConstraint canonicalConstraint(const LinearConstraint& c);

/// Canonical form for structural comparison: scaled constraints, sorted,
/// duplicates removed, within sorted disjuncts.
Plp canonicalPlp(const Plp& p);

std::string exprStr(const AffineExpr& e, const VarTable& vars);
std::string constraintStr(const LinearConstraint& c, const VarTable& vars);
std::string assertionStr(const Assertion& a, const VarTable& vars);
std::string plpStr(const Plp& p, const VarTable& vars);

} // namespace stochinv
