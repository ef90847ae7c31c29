#include "stochinv/assertion.hpp"

#include <algorithm>
#include <sstream>

namespace stochinv {

namespace {

// Negation-normal form helper: dnf of f or of not(f).
Plp dnfRec(const Formula& f, bool negated, size_t cap);

Plp orCombine(Plp a, Plp&& b, size_t cap) {
    for (auto& d : b.disjuncts) a.disjuncts.push_back(std::move(d));
    if (a.disjuncts.size() > cap)
        throw BlowupLimitError("DNF disjunct count exceeds cap of " + std::to_string(cap));
    return a;
}

Plp andCombine(const Plp& a, const Plp& b, size_t cap) {
    Plp out;
    for (const auto& da : a.disjuncts)
        for (const auto& db : b.disjuncts) {
            Assertion merged = da;
            merged.insert(merged.end(), db.begin(), db.end());
            out.disjuncts.push_back(std::move(merged));
            if (out.disjuncts.size() > cap)
                throw BlowupLimitError("DNF disjunct count exceeds cap of " + std::to_string(cap));
        }
    return out;
}

Plp dnfRec(const Formula& f, bool negated, size_t cap) {
    switch (f.kind) {
        case Formula::Kind::True:
            return negated ? Plp::bottom() : Plp::top();
        case Formula::Kind::False:
            return negated ? Plp::top() : Plp::bottom();
        case Formula::Kind::Atom:
            return Plp::single({negated ? f.atom.negated() : f.atom});
        case Formula::Kind::Not:
            return dnfRec(f.children[0], !negated, cap);
        case Formula::Kind::And:
        case Formula::Kind::Or: {
            bool isAnd = (f.kind == Formula::Kind::And) != negated;  // De Morgan
            Plp acc = isAnd ? Plp::top() : Plp::bottom();
            for (const auto& ch : f.children) {
                Plp c = dnfRec(ch, negated, cap);
                acc = isAnd ? andCombine(acc, c, cap) : orCombine(std::move(acc), std::move(c), cap);
            }
            return acc;
        }
    }
    return Plp::bottom();
}

} // namespace

Plp toDnf(const Formula& f, size_t cap) { return dnfRec(f, false, cap); }

Plp negatePlp(const Plp& p, size_t cap) {
    // not (D1 or ... or Dk) = and_i not Di, where not Di is a disjunction of
    // negated constraints.
    Plp acc = Plp::top();
    for (const auto& d : p.disjuncts) {
        Plp notD;
        for (const auto& c : d) notD.disjuncts.push_back({c.negated()});
        acc = andCombine(acc, notD, cap);
    }
    return acc;
}

Plp andPlp(const Plp& a, const Plp& b, size_t cap) { return andCombine(a, b, cap); }

LinearConstraint canonicalConstraint(const LinearConstraint& c) {
    LinearConstraint out = c;
    Rat lead(0);
    if (!out.expr.coeffs.empty()) lead = out.expr.coeffs.begin()->second;
    else lead = out.expr.constant;
    if (lead != 0) {
        Rat scale = 1 / ratAbs(lead);
        out.expr *= scale;
    }
    return out;
}

namespace {
bool constraintLess(const LinearConstraint& a, const LinearConstraint& b) {
    if (a.strict != b.strict) return a.strict < b.strict;
    if (a.expr.constant != b.expr.constant) return a.expr.constant < b.expr.constant;
    auto ita = a.expr.coeffs.begin(), itb = b.expr.coeffs.begin();
    for (; ita != a.expr.coeffs.end() && itb != b.expr.coeffs.end(); ++ita, ++itb) {
        if (ita->first != itb->first) return ita->first < itb->first;
        if (ita->second != itb->second) return ita->second < itb->second;
    }
    return a.expr.coeffs.size() < b.expr.coeffs.size();
}
bool assertionLess(const Assertion& a, const Assertion& b) {
    for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i] == b[i]) continue;
        return constraintLess(a[i], b[i]);
    }
    return a.size() < b.size();
}
} // namespace

Plp canonicalPlp(const Plp& p) {
    Plp out;
    for (const auto& d : p.disjuncts) {
        Assertion canon;
        canon.reserve(d.size());
        for (const auto& c : d) canon.push_back(canonicalConstraint(c));
        std::sort(canon.begin(), canon.end(), constraintLess);
        canon.erase(std::unique(canon.begin(), canon.end()), canon.end());
        out.disjuncts.push_back(std::move(canon));
    }
    std::sort(out.disjuncts.begin(), out.disjuncts.end(), assertionLess);
    out.disjuncts.erase(std::unique(out.disjuncts.begin(), out.disjuncts.end()), out.disjuncts.end());
    return out;
}

std::string exprStr(const AffineExpr& e, const VarTable& vars) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [v, c] : e.coeffs) {
        Rat a = ratAbs(c);
        if (first) {
            if (c < 0) os << "-";
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        if (a != 1) os << ratDecimalStr(a) << "*";
        if (v >= 0 && v < vars.size()) os << vars.name(v);
        else os << "$v" << v;
    }
    if (first) {
        os << ratDecimalStr(e.constant);
    } else if (e.constant != 0) {
        os << (e.constant < 0 ? " - " : " + ") << ratDecimalStr(ratAbs(e.constant));
    }
    return os.str();
}

std::string constraintStr(const LinearConstraint& c, const VarTable& vars) {
    // Print as `terms <= k`, flipped to `>=` when the leading coefficient is
    // negative; strict constraints use the grammar's `not (..)` form.
    AffineExpr lhs = c.expr;
    Rat k = -lhs.constant;
    lhs.constant = 0;
    bool flip = !lhs.coeffs.empty() && lhs.coeffs.begin()->second < 0;
    if (flip) {
        lhs *= Rat(-1);
        k = -k;
    }
    const char* rel = flip == c.strict ? " <= " : " >= ";  // negated for strict
    std::string body = exprStr(lhs, vars) + rel + ratDecimalStr(k);
    if (c.strict) return "not (" + body + ")";  // e < 0  <=>  not (e >= 0)
    return body;
}

std::string assertionStr(const Assertion& a, const VarTable& vars) {
    if (a.empty()) return "true";
    std::ostringstream os;
    for (size_t i = 0; i < a.size(); ++i) {
        if (i) os << " and ";
        os << constraintStr(a[i], vars);
    }
    return os.str();
}

std::string plpStr(const Plp& p, const VarTable& vars) {
    if (p.isFalse()) return "false";
    if (p.isTrue()) return "true";
    std::ostringstream os;
    for (size_t i = 0; i < p.disjuncts.size(); ++i) {
        if (i) os << " or ";
        bool paren = p.disjuncts.size() > 1 && p.disjuncts[i].size() > 1;
        if (paren) os << "(";
        os << assertionStr(p.disjuncts[i], vars);
        if (paren) os << ")";
    }
    return os.str();
}

} // namespace stochinv
