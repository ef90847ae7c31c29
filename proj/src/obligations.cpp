#include "stochinv/obligations.hpp"

#include "stochinv/parser.hpp"

#include <sstream>

namespace stochinv {

const char* obligationKindName(Obligation::Kind k) {
    switch (k) {
        case Obligation::Kind::NonNeg: return "nonnegativity";
        case Obligation::Kind::Decrease: return "decrease";
        case Obligation::Kind::DiffBound: return "difference-bound";
        case Obligation::Kind::Sign: return "sign";
    }
    return "?";
}

TPredMap TPredMap::fromPredMap(const PredMap& m, const Pcfg& p) {
    TPredMap out;
    out.at.resize(static_cast<size_t>(p.numLocations()));
    for (int l = 0; l < p.numLocations(); ++l) {
        for (const auto& d : m(l).disjuncts) {
            std::vector<TRow> rows;
            rows.reserve(d.size());
            for (const auto& c : d) rows.push_back(TRow::concrete(c));
            out.at[static_cast<size_t>(l)].push_back(std::move(rows));
        }
    }
    return out;
}

namespace {

struct Gen {
    const Pcfg& p;
    const std::vector<TemplateExpr>& etas;
    std::vector<Obligation> out;

    std::string locName(int l) const { return p.locations[static_cast<size_t>(l)].name; }
    std::string transLabel(int ti) const {
        const auto& t = p.transitions[static_cast<size_t>(ti)];
        std::ostringstream os;
        os << locName(t.source) << "->" << locName(t.target);
        switch (t.update.kind) {
            case Update::Kind::Identity: break;
            case Update::Kind::Affine:
                os << " (" << p.vars.name(t.var) << " := " << exprStr(t.update.expr, p.vars) << ")";
                break;
            case Update::Kind::Sample:
                os << " (" << p.vars.name(t.var) << " := ";
                if (!t.update.expr.isZero()) os << exprStr(t.update.expr, p.vars) << " + ";
                os << "sample " << t.update.distId << ")";
                break;
            case Update::Kind::Choose:
                os << " (" << p.vars.name(t.var) << " := choose " << setSpecStr(t.update.set) << ")";
                break;
        }
        return os.str();
    }

    void emit(Obligation ob) { out.push_back(std::move(ob)); }

    // E(a) <= 0 universally over a in the interval, where `a` is extended
    // variable index aIdx in `concl`. Emits endpoint conclusions and sign
    // obligations on the coefficient; integral domains are relaxed to their
    // real interval.
    void emitOverInterval(Obligation base, const TemplateExpr& concl, int aIdx, const SetInterval& iv) {
        SymLin coeffA = concl.coeff(aIdx);
        auto atValue = [&](const Rat& v) {
            TemplateExpr e = concl;
            e.coeffs.erase(aIdx);
            e.constant += coeffA * v;
            return e;
        };
        auto signOb = [&](SymLin s, const char* which) {
            if (s.isConstant() && s.constant <= 0) return;  // trivially true
            Obligation ob = base;
            ob.kind = Obligation::Kind::Sign;
            ob.label += std::string(" [coefficient ") + which + "]";
            ob.premise.clear();
            ob.conclusion = TemplateExpr::symbolic(s);
            emit(std::move(ob));
        };
        if (iv.lo && iv.hi) {
            Obligation lo = base, hi = base;
            lo.conclusion = atValue(*iv.lo);
            hi.conclusion = atValue(*iv.hi);
            lo.label += " [at " + ratDecimalStr(*iv.lo) + "]";
            hi.label += " [at " + ratDecimalStr(*iv.hi) + "]";
            emit(std::move(lo));
            if (*iv.lo != *iv.hi) emit(std::move(hi));
        } else if (iv.lo) {
            signOb(coeffA, "<= 0");
            Obligation lo = base;
            lo.conclusion = atValue(*iv.lo);
            lo.label += " [at " + ratDecimalStr(*iv.lo) + "]";
            emit(std::move(lo));
        } else if (iv.hi) {
            signOb(-coeffA, ">= 0");
            Obligation hi = base;
            hi.conclusion = atValue(*iv.hi);
            hi.label += " [at " + ratDecimalStr(*iv.hi) + "]";
            emit(std::move(hi));
        } else {
            signOb(coeffA, "<= 0");
            signOb(-coeffA, ">= 0");
            Obligation mid = base;
            mid.conclusion = atValue(Rat(0));
            mid.label += " [coefficient forced 0]";
            emit(std::move(mid));
        }
    }

    // eta(target) with the transition's update substituted; for Sample the
    // expected value is substituted, for Choose the caller must expand.
    TemplateExpr substitutedEta(const Transition& t) const {
        const TemplateExpr& tail = etas[static_cast<size_t>(t.target)];
        switch (t.update.kind) {
            case Update::Kind::Identity:
                return tail;
            case Update::Kind::Affine:
                return tail.substituted(t.var, t.update.expr);
            case Update::Kind::Sample: {
                const DistributionSpec& d = p.dists.all().at(t.update.distId);
                AffineExpr repl = t.update.expr;
                repl.constant += d.mean;
                return tail.substituted(t.var, repl);
            }
            case Update::Kind::Choose:
                throw Error("internal: choose update needs interval expansion", 4);
        }
        return tail;
    }
};

} // namespace

std::vector<Obligation> preexpObligations(const Pcfg& p, const std::vector<TemplateExpr>& etas,
                                          int loc, const std::vector<TRow>& premiseBase,
                                          const TemplateExpr& eps, PreexpMode mode) {
    Gen g{p, etas, {}};
    const Location& L = p.locations[static_cast<size_t>(loc)];
    TemplateExpr rhs = etas[static_cast<size_t>(loc)];
    if (mode != PreexpMode::ValueOnly) rhs -= eps;  // conclusion: preexp - (eta - eps) <= 0

    Obligation proto;
    proto.kind = Obligation::Kind::Decrease;
    proto.loc = loc;
    proto.premise = premiseBase;
    proto.numExtVars = p.vars.size();

    auto outs = p.outgoing(loc);
    if (L.kind == LocKind::Prob) {
        TemplateExpr sum;
        for (int ti : outs) {
            const auto& t = p.transitions[static_cast<size_t>(ti)];
            if (t.update.kind == Update::Kind::Choose)
                throw Error("choose update out of a probabilistic location", 2);
            sum += g.substitutedEta(t) * (t.prob ? *t.prob : Rat(0));
        }
        Obligation ob = proto;
        ob.label = "decrease at " + g.locName(loc);
        ob.conclusion = sum - rhs;
        g.emit(std::move(ob));
    } else if (L.kind == LocKind::Nondet) {
        for (int ti : outs) {
            const auto& t = p.transitions[static_cast<size_t>(ti)];
            if (t.update.kind == Update::Kind::Choose)
                throw Error("choose update out of a nondeterministic location", 2);
            Obligation ob = proto;
            ob.transIdx = ti;
            ob.label = "decrease at " + g.locName(loc) + " via " + g.transLabel(ti);
            ob.conclusion = g.substitutedEta(t) - rhs;
            g.emit(std::move(ob));
        }
    } else {
        for (int ti : outs) {
            const auto& t = p.transitions[static_cast<size_t>(ti)];
            const Plp guard = t.guard ? *t.guard : Plp::top();
            for (const auto& gd : guard.disjuncts) {
                Obligation ob = proto;
                ob.transIdx = ti;
                ob.label = "decrease at " + g.locName(loc) + " via " + g.transLabel(ti);
                for (const auto& c : gd) ob.premise.push_back(TRow::concrete(c));
                if (t.update.kind == Update::Kind::Choose) {
                    int aIdx = ob.numExtVars++;
                    ob.freshNames.push_back("$choice");
                    TemplateExpr tail = etas[static_cast<size_t>(t.target)];
                    TemplateExpr withA = tail.substituted(t.var, AffineExpr::var(aIdx));
                    for (const auto& iv : t.update.set.intervals)
                        g.emitOverInterval(ob, withA - rhs, aIdx, iv);
                } else {
                    ob.conclusion = g.substitutedEta(t) - rhs;
                    g.emit(std::move(ob));
                }
            }
        }
    }
    return std::move(g.out);
}

std::vector<Obligation> generateObligations(const Pcfg& p, const std::vector<TemplateExpr>& etas,
                                            const TPredMap& invariant, const TPredMap& target,
                                            const TPredMap& notTarget, const TemplateExpr& eps,
                                            const TemplateExpr& cBound,
                                            const ObligationGenOptions& opts) {
    Gen g{p, etas, {}};
    std::vector<Obligation> all;

    // Vacuousness is decided on the premise as written, strict constraints
    // respected: a branch premise like `x <= 1000 and x > 1000` is genuinely
    // empty and its obligation drops, even though its closure contains the
    // boundary point. Survivors are relaxed to their closures by consumers.
    auto keep = [&](const Obligation& ob) {
        if (!opts.dropVacuous || !ob.premiseConcrete()) return true;
        return satisfiableStrict(ob.premiseAssertion()).satisfiable;
    };

    for (int loc = 0; loc < p.numLocations(); ++loc) {
        // Nonnegativity: inside the target set for RepSM, outside it for RSM.
        const TPred& nonnegSide = opts.mode == CertKind::RepSm ? target(loc) : notTarget(loc);
        for (const auto& inv : invariant(loc)) {
            for (const auto& side : nonnegSide) {
                Obligation ob;
                ob.kind = Obligation::Kind::NonNeg;
                ob.loc = loc;
                ob.label = "nonnegativity at " + g.locName(loc);
                ob.numExtVars = p.vars.size();
                ob.premise = inv;
                ob.premise.insert(ob.premise.end(), side.begin(), side.end());
                ob.conclusion = -etas[static_cast<size_t>(loc)];
                if (keep(ob)) all.push_back(std::move(ob));
            }
        }
        // Expected decrease outside the target set; RepSM exempts terminal
        // locations.
        bool decreaseHere = opts.mode == CertKind::Rsm || !p.isTerminal(loc);
        if (decreaseHere) {
            for (const auto& inv : invariant(loc)) {
                for (const auto& side : notTarget(loc)) {
                    std::vector<TRow> premiseBase = inv;
                    premiseBase.insert(premiseBase.end(), side.begin(), side.end());
                    auto obs = preexpObligations(p, etas, loc, premiseBase, eps,
                                                 opts.mode == CertKind::Rsm ? PreexpMode::RsmDecrease
                                                                            : PreexpMode::RepSmDecrease);
                    for (auto& ob : obs)
                        if (keep(ob)) all.push_back(std::move(ob));
                }
            }
        }
    }

    if (!opts.diffBounds) return all;

    for (size_t ti = 0; ti < p.transitions.size(); ++ti) {
        const auto& t = p.transitions[ti];
        const Plp guard = t.guard ? *t.guard : Plp::top();
        for (const auto& inv : invariant(t.source)) {
            for (const auto& gd : guard.disjuncts) {
                Obligation proto;
                proto.kind = Obligation::Kind::DiffBound;
                proto.loc = t.source;
                proto.transIdx = static_cast<int>(ti);
                proto.numExtVars = p.vars.size();
                proto.premise = inv;
                for (const auto& c : gd) proto.premise.push_back(TRow::concrete(c));

                const TemplateExpr& here = etas[static_cast<size_t>(t.source)];
                auto emitBoth = [&](Obligation base, const TemplateExpr& there, const std::string& note) {
                    Obligation up = base, down = base;
                    up.label = "difference bound on " + g.transLabel(static_cast<int>(ti)) + note;
                    down.label = up.label + " [reverse]";
                    up.conclusion = here - there - cBound;
                    down.conclusion = there - here - cBound;
                    if (keep(up)) all.push_back(std::move(up));
                    if (keep(down)) all.push_back(std::move(down));
                };

                switch (t.update.kind) {
                    case Update::Kind::Identity:
                    case Update::Kind::Affine: {
                        emitBoth(proto, g.substitutedEta(t), "");
                        break;
                    }
                    case Update::Kind::Sample: {
                        const DistributionSpec& d = p.dists.all().at(t.update.distId);
                        for (const auto& sd : d.support.disjuncts) {
                            Obligation base = proto;
                            int tIdx = base.numExtVars++;
                            base.freshNames.push_back("$" + t.update.distId);
                            for (const auto& c : sd) {
                                LinearConstraint remapped{c.expr.substituted(0, AffineExpr::var(tIdx)), c.strict};
                                base.premise.push_back(TRow::concrete(remapped));
                            }
                            AffineExpr repl = t.update.expr + AffineExpr::var(tIdx);
                            TemplateExpr there = etas[static_cast<size_t>(t.target)].substituted(t.var, repl);
                            emitBoth(base, there, " [sampled value]");
                        }
                        break;
                    }
                    case Update::Kind::Choose: {
                        Obligation base = proto;
                        int aIdx = base.numExtVars++;
                        base.freshNames.push_back("$choice");
                        TemplateExpr there =
                            etas[static_cast<size_t>(t.target)].substituted(t.var, AffineExpr::var(aIdx));
                        for (const auto& iv : t.update.set.intervals) {
                            Obligation up = base, down = base;
                            up.label = "difference bound on " + g.transLabel(static_cast<int>(ti));
                            down.label = up.label + " [reverse]";
                            if (keep(base)) {
                                g.emitOverInterval(up, here - there - cBound, aIdx, iv);
                                g.emitOverInterval(down, there - here - cBound, aIdx, iv);
                            }
                        }
                        break;
                    }
                }
            }
        }
    }
    for (auto& ob : g.out) all.push_back(std::move(ob));  // interval expansions
    return all;
}

PreexpValue preexpValue(const Pcfg& p, const ExprMap& eta, int loc, const std::vector<Rat>& x) {
    const Location& L = p.locations[static_cast<size_t>(loc)];
    auto outs = p.outgoing(loc);
    auto valueVia = [&](const Transition& t) -> PreexpValue {
        std::vector<Rat> y = x;
        switch (t.update.kind) {
            case Update::Kind::Identity:
                break;
            case Update::Kind::Affine:
                y[static_cast<size_t>(t.var)] = t.update.expr.eval(x);
                break;
            case Update::Kind::Sample: {
                const DistributionSpec& d = p.dists.all().at(t.update.distId);
                y[static_cast<size_t>(t.var)] = t.update.expr.eval(x) + d.mean;
                break;
            }
            case Update::Kind::Choose: {
                // supremum of an affine function over the union of intervals
                const AffineExpr& e = eta(t.target);
                Rat coeff = e.coeff(t.var);
                bool any = false;
                Rat best(0);
                for (const auto& iv : t.update.set.intervals) {
                    if ((coeff > 0 && !iv.hi) || (coeff < 0 && !iv.lo)) return PreexpValue{false, Rat(0)};
                    Rat pick = coeff > 0 ? (iv.hi ? *iv.hi : Rat(0))
                               : coeff < 0 ? (iv.lo ? *iv.lo : Rat(0))
                                           : (iv.lo ? *iv.lo : (iv.hi ? *iv.hi : Rat(0)));
                    std::vector<Rat> z = x;
                    z[static_cast<size_t>(t.var)] = pick;
                    Rat v = e.eval(z);
                    if (!any || v > best) best = v;
                    any = true;
                }
                if (!any) return PreexpValue{false, Rat(0)};
                PreexpValue pv;
                pv.defined = true;
                pv.value = best;
                return pv;
            }
        }
        return PreexpValue{true, eta.value(t.target, y)};
    };

    if (L.kind == LocKind::Prob) {
        Rat sum(0);
        for (int ti : outs) {
            const auto& t = p.transitions[static_cast<size_t>(ti)];
            PreexpValue v = valueVia(t);
            if (!v.defined) return v;
            sum += (t.prob ? *t.prob : Rat(0)) * v.value;
        }
        return PreexpValue{true, sum};
    }
    if (L.kind == LocKind::Nondet) {
        bool any = false;
        Rat best(0);
        for (int ti : outs) {
            PreexpValue v = valueVia(p.transitions[static_cast<size_t>(ti)]);
            if (!v.defined) return v;
            if (!any || v.value > best) best = v.value;
            any = true;
        }
        return PreexpValue{any, best};
    }
    for (int ti : outs) {
        const auto& t = p.transitions[static_cast<size_t>(ti)];
        if (!t.guard || t.guard->holdsAt(x)) return valueVia(t);
    }
    throw GuardGapError("no guard enabled at " + p.locations[static_cast<size_t>(loc)].name);
}

} // namespace stochinv
