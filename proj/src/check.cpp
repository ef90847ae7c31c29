#include "stochinv/check.hpp"

#include <random>
#include <sstream>

namespace stochinv {

std::string ObligationViolation::describe(const Pcfg& p) const {
    std::ostringstream os;
    os << obligationKindName(obligation.kind) << " at " << p.locations[static_cast<size_t>(obligation.loc)].name;
    if (obligation.transIdx >= 0) os << " {" << obligation.label << "}";
    else os << " {" << obligation.label << "}";
    os << ", witness (";
    for (int v = 0; v < static_cast<int>(witness.size()); ++v) {
        if (v) os << ", ";
        if (v < p.vars.size()) os << p.vars.name(v) << "=";
        else if (static_cast<size_t>(v - p.vars.size()) < obligation.freshNames.size())
            os << obligation.freshNames[static_cast<size_t>(v - p.vars.size())] << "=";
        os << ratDecimalStr(witness[static_cast<size_t>(v)]);
    }
    os << "), excess " << ratDecimalStr(excess);
    return os.str();
}

std::vector<Obligation> certificateObligations(const Pcfg& p, const Certificate& cert) {
    std::vector<TemplateExpr> etas;
    etas.reserve(static_cast<size_t>(p.numLocations()));
    for (int l = 0; l < p.numLocations(); ++l) etas.emplace_back(cert.eta(l));

    TPredMap inv = TPredMap::fromPredMap(cert.invariant, p);
    TPredMap tgt = TPredMap::fromPredMap(cert.target, p);
    PredMap notTargetMap;
    notTargetMap.dflt = Plp::top();
    for (int l = 0; l < p.numLocations(); ++l) notTargetMap.set(l, negatePlp(cert.target(l)));
    TPredMap notTgt = TPredMap::fromPredMap(notTargetMap, p);

    ObligationGenOptions opts;
    opts.mode = cert.kind;
    opts.dropVacuous = true;
    return generateObligations(p, etas, inv, tgt, notTgt, TemplateExpr(AffineExpr(cert.eps)),
                               TemplateExpr(AffineExpr(cert.c)), opts);
}

CheckResult checkCertificate(const Pcfg& p, const Certificate& cert) {
    CheckResult res;
    if (cert.c < cert.eps) {
        res.valid = false;
        res.notes.push_back("difference bound c is smaller than eps");
        return res;
    }
    Rat m0 = cert.eta.value(p.initLoc, p.initVal);
    if (m0 != cert.m0) {
        res.valid = false;
        res.notes.push_back("declared m0 " + ratDecimalStr(cert.m0) + " differs from eta(init) = " +
                            ratDecimalStr(m0));
        return res;
    }

    auto obligations = certificateObligations(p, cert);
    res.obligationsChecked = static_cast<int>(obligations.size());
    for (const auto& ob : obligations) {
        if (!ob.premiseConcrete() || !ob.conclusion.isConcrete())
            throw Error("internal: certificate obligations must be concrete", 4);
        auto row = [&](const char* status) {
            res.table.push_back(CheckResult::Row{p.locations[static_cast<size_t>(ob.loc)].name,
                                                 obligationKindName(ob.kind), ob.label, status});
        };
        Assertion premise = ob.premiseAssertion();
        Assertion closed = closure(premise);
        AffineExpr concl = ob.conclusion.toAffine();
        if (!satisfiableClosure(closed)) {  // vacuous
            row("vacuous");
            continue;
        }
        MaxOutcome mx = maximizeOverClosure(concl, closed);
        bool violated =
            mx.kind == MaxOutcome::Kind::Unbounded || (mx.kind == MaxOutcome::Kind::Optimal && mx.value > 0);
        if (!violated) {
            row("ok");
            continue;
        }
        // Only a genuine interior violation invalidates; excess confined to
        // the boundary of a strict premise constraint is accepted with a note
        // (matching the closure relaxation used during synthesis).
        Assertion withExcess = premise;
        withExcess.push_back(LinearConstraint{-concl, true});  // conclusion > 0
        StrictSatResult strict = satisfiableStrict(withExcess);
        if (!strict.satisfiable) {
            res.notes.push_back("boundary-relaxed: " + ob.label +
                                " exceeds 0 only on the closure boundary of a strict premise");
            row("boundary-relaxed");
            continue;
        }
        row("violated");
        ObligationViolation v;
        v.obligation = ob;
        v.witness = strict.witness;
        v.witness.resize(static_cast<size_t>(ob.numExtVars), Rat(0));
        v.excess = concl.eval(v.witness);
        if (!(v.excess > 0) || !assertionHoldsAt(premise, v.witness))
            throw Error("internal: checker produced a witness that does not violate its obligation", 4);
        res.violations.push_back(std::move(v));
    }
    res.valid = res.violations.empty();
    return res;
}

namespace {

uint64_t splitmix64(uint64_t& s) {
    uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Uniform rational in [lo, hi] with denominator 2^20.
Rat sampleRat(std::mt19937_64& rng, const Rat& lo, const Rat& hi) {
    constexpr uint64_t kDen = 1 << 20;
    uint64_t u = rng() % (kDen + 1);
    return lo + (hi - lo) * Rat(u, kDen);
}

} // namespace

SpotCheckReport spotCheck(const Pcfg& p, const Certificate& cert, long long samples, uint64_t seed,
                          const Rat& box) {
    SpotCheckReport rep;
    auto obligations = certificateObligations(p, cert);

    // Per-obligation bounds of the fresh variables, taken from the premise
    // rows that mention only the fresh variable.
    struct FreshRange { Rat lo, hi; };
    std::vector<std::vector<FreshRange>> ranges(obligations.size());
    for (size_t i = 0; i < obligations.size(); ++i) {
        const auto& ob = obligations[i];
        int nf = ob.numExtVars - p.vars.size();
        std::vector<FreshRange> r(static_cast<size_t>(nf), FreshRange{-box, box});
        for (const auto& row : ob.premise) {
            AffineExpr e = row.e.toAffine();
            if (e.coeffs.size() != 1) continue;
            int v = e.coeffs.begin()->first;
            if (v < p.vars.size()) continue;
            Rat a = e.coeffs.begin()->second;
            Rat bound = -e.constant / a;  // a*v + const <= 0
            auto& fr = r[static_cast<size_t>(v - p.vars.size())];
            if (a > 0 && bound < fr.hi) fr.hi = bound;
            if (a < 0 && bound > fr.lo) fr.lo = bound;
        }
        for (auto& fr : r)
            if (fr.lo > fr.hi) fr.lo = fr.hi;
        ranges[i] = std::move(r);
    }

    uint64_t s = seed;
    std::mt19937_64 rng(splitmix64(s));
    int nLocs = p.numLocations();
    for (long long it = 0; it < samples; ++it) {
        int loc = static_cast<int>(rng() % static_cast<uint64_t>(nLocs));
        // rejection-sample a point inside the supporting predicate
        std::vector<Rat> x(static_cast<size_t>(p.vars.size()));
        bool inside = false;
        for (int tries = 0; tries < 40 && !inside; ++tries) {
            for (auto& xi : x) xi = sampleRat(rng, -box, box);
            inside = cert.invariant(loc).holdsAt(x);
        }
        ++rep.samplesTried;
        if (!inside) continue;
        for (size_t i = 0; i < obligations.size(); ++i) {
            const auto& ob = obligations[i];
            if (ob.loc != loc) continue;
            std::vector<Rat> ext = x;
            for (const auto& fr : ranges[i]) ext.push_back(sampleRat(rng, fr.lo, fr.hi));
            if (!assertionHoldsAt(ob.premiseAssertion(), ext)) continue;
            ++rep.samplesInPremise;
            Rat v = ob.conclusion.toAffine().eval(ext);
            if (v > 0) {
                ++rep.violations;
                if (rep.firstViolations.size() < 5) {
                    ObligationViolation viol;
                    viol.obligation = ob;
                    viol.witness = ext;
                    viol.excess = v;
                    rep.firstViolations.push_back(viol.describe(p));
                }
            }
        }
    }
    return rep;
}

} // namespace stochinv
