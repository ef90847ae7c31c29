#include "stochinv/synth.hpp"

#include "stochinv/bounds.hpp"

#include <algorithm>
#include <future>
#include <ostream>
#include <sstream>
#include <thread>

namespace stochinv {

namespace {

constexpr const char* kCSymbol = "c";

// Per-location template coefficients b@l, a.<var>@l registered in a fixed
// order so LP columns are deterministic.
std::vector<TemplateExpr> makeTemplates(const Pcfg& p, SymbolTable& syms, const std::string& prefix) {
    std::vector<TemplateExpr> etas;
    etas.reserve(static_cast<size_t>(p.numLocations()));
    for (int l = 0; l < p.numLocations(); ++l) {
        const std::string& ln = p.locations[static_cast<size_t>(l)].name;
        TemplateExpr t;
        t.constant = SymLin::var(syms.intern(prefix + "b@" + ln));
        for (int v = 0; v < p.vars.size(); ++v)
            t.setCoeff(v, SymLin::var(syms.intern(prefix + "a." + p.vars.name(v) + "@" + ln)));
        etas.push_back(std::move(t));
    }
    return etas;
}

std::unique_ptr<SynthSystem> genSystem(const Pcfg& p, const PredMap& invariant, const PredMap& target,
                                       const Rat& eps, std::optional<Rat> cFixed, CertKind mode) {
    auto sys = std::make_unique<SynthSystem>();
    std::vector<TemplateExpr> etas = makeTemplates(p, sys->syms, "");
    int cSymId = -1;
    TemplateExpr cBound;
    if (cFixed) {
        cBound = TemplateExpr(AffineExpr(*cFixed));
    } else {
        cSymId = sys->syms.intern(kCSymbol);
        cBound = TemplateExpr::symbolic(SymLin::var(cSymId));
    }

    TPredMap inv = TPredMap::fromPredMap(invariant, p);
    TPredMap tgt = TPredMap::fromPredMap(target, p);
    PredMap notTargetMap = PredMap::top();
    for (int l = 0; l < p.numLocations(); ++l) notTargetMap.set(l, negatePlp(target(l)));
    notTargetMap.dflt = negatePlp(target.dflt);
    TPredMap notTgt = TPredMap::fromPredMap(notTargetMap, p);

    ObligationGenOptions opts;
    opts.mode = mode;
    opts.dropVacuous = true;
    auto obligations =
        generateObligations(p, etas, inv, tgt, notTgt, TemplateExpr(AffineExpr(eps)), cBound, opts);

    // Register template columns first, in symbol order.
    for (int s = 0; s < sys->syms.size(); ++s) sys->builder.columnForSymbol(s);
    sys->templateColumns = sys->builder.columnCount();
    if (cSymId >= 0) sys->cColumn = sys->builder.columnForSymbol(cSymId);

    int obIdx = 0;
    for (const auto& ob : obligations) {
        Assertion premise = closure(ob.premiseAssertion());
        farkasRows(sys->builder, premise, ob.conclusion, std::to_string(obIdx++));
    }
    if (cSymId >= 0) {
        // eps <= c
        SymLin row(eps);
        row -= SymLin::var(sys->builder.columnForSymbol(cSymId));
        sys->builder.addRow(std::move(row), Rel::Le);
    }

    // m0 = eta(init)(x_init) over columns.
    {
        const TemplateExpr& e = etas[static_cast<size_t>(p.initLoc)];
        SymLin m0 = sys->builder.toColumns(e.constant);
        for (const auto& [v, s] : e.coeffs)
            m0 += sys->builder.toColumns(s) * p.initVal[static_cast<size_t>(v)];
        sys->m0Columns = std::move(m0);
    }
    return sys;
}

} // namespace

ExprMap SynthSystem::etaFromAssignment(const Pcfg& p, const std::vector<Rat>& assignment) const {
    ExprMap eta;
    for (int l = 0; l < p.numLocations(); ++l) {
        const std::string& ln = p.locations[static_cast<size_t>(l)].name;
        AffineExpr e;
        // Template columns were registered first and in symbol order, so the
        // symbol id equals the column index.
        for (int s = 0; s < syms.size(); ++s) {
            const std::string& name = syms.name(s);
            if (name == "b@" + ln) e.constant = assignment[static_cast<size_t>(s)];
            for (int v = 0; v < p.vars.size(); ++v)
                if (name == "a." + p.vars.name(v) + "@" + ln) e.setCoeff(v, assignment[static_cast<size_t>(s)]);
        }
        eta.at[l] = std::move(e);
    }
    return eta;
}

std::unique_ptr<SynthSystem> genRepsmSystem(const Pcfg& p, const PredMap& invariant,
                                            const PredMap& target, const Rat& eps,
                                            std::optional<Rat> cFixed) {
    return genSystem(p, invariant, target, eps, cFixed, CertKind::RepSm);
}

std::unique_ptr<SynthSystem> genRsmSystem(const Pcfg& p, const PredMap& invariant,
                                          const PredMap& target, const Rat& eps,
                                          std::optional<Rat> cFixed) {
    return genSystem(p, invariant, target, eps, cFixed, CertKind::Rsm);
}

namespace {

struct SweepPoint {
    int j = -1;
    bool feasible = false;
    bool negative = false;  // m0 < 0
    Rat m0{0};
    Rat p{1};               // exact upper bound from the tail-bound evaluation
    BigFloat pFloat{1};
    bool floored = false;
};

SweepPoint sweepOne(const Pcfg& p, const PredMap& invariant, const PredMap& notPi, const Rat& cValue,
                    int j) {
    SweepPoint pt;
    pt.j = j;
    auto sys = genRepsmSystem(p, invariant, notPi, Rat(1), cValue);
    LpProblem& lp = sys->builder.problem();
    lp.objective = sys->m0Columns;
    LpOutcome out = lpSolve(lp);
    if (out.status == LpOutcome::Status::Unbounded) {
        // A more negative m0 only tightens the bound; keep the numbers finite.
        SymLin floor = -sys->m0Columns;
        floor.constant -= Rat(1000000000);
        lp.addRow(std::move(floor), Rel::Le);  // -m0 - 1e9 <= 0, i.e. m0 >= -1e9
        out = lpSolve(lp);
        pt.floored = true;
    }
    if (!out.optimal()) return pt;
    pt.feasible = true;
    pt.m0 = out.value;
    if (pt.m0 >= 0) return pt;
    pt.negative = true;
    ReachBound rb = reachBound(Rat(1), cValue, pt.m0);
    pt.pFloat = rb.value;
    pt.p = rb.exactValue;
    return pt;
}

} // namespace

RepsmSynthResult synthesizeRepsm(const Pcfg& p, const PredMap& invariant, const PredMap& pi,
                                 int sweepN, int jobs) {
    RepsmSynthResult res;
    if (!pi.isPolyhedral(p)) throw NotPolyhedralError("the predicate map must be polyhedral");
    PredMap notPi = negatePredMap(pi, p);

    // Degenerate cases first.
    bool anyViolation = false;
    for (int l = 0; l < p.numLocations() && !anyViolation; ++l)
        for (const auto& d : notPi(l).disjuncts)
            if (satisfiableStrict(d).satisfiable) { anyViolation = true; break; }
    if (!anyViolation) {
        res.status = SynthStatus::TrivialZero;
        res.p = 0;
        return res;
    }
    if (notPi(p.initLoc).holdsAt(p.initVal)) {
        res.status = SynthStatus::TrivialOne;
        res.p = 1;
        return res;
    }

    // Step 1+2: eps = 1, minimize the difference bound.
    Rat cMin;
    {
        auto sys = genRepsmSystem(p, invariant, notPi, Rat(1), std::nullopt);
        LpProblem& lp = sys->builder.problem();
        lp.objective = SymLin::var(*sys->cColumn);
        LpOutcome out = lpSolve(lp);
        if (!out.optimal()) {
            res.status = SynthStatus::NoCertificate;
            res.notes.push_back(out.status == LpOutcome::Status::Infeasible
                                    ? "constraint system infeasible at eps = 1"
                                    : "difference-bound minimization unbounded");
            return res;
        }
        cMin = out.value;
    }
    res.cMin = cMin;

    // Step 3: sweep integer offsets of the difference bound, minimizing m0.
    std::vector<SweepPoint> points(static_cast<size_t>(sweepN) + 1);
    auto worker = [&](int lo, int hi) {
        for (int j = lo; j < hi; ++j)
            points[static_cast<size_t>(j)] = sweepOne(p, invariant, notPi, cMin + j, j);
    };
    if (jobs <= 1) {
        worker(0, sweepN + 1);
    } else {
        std::vector<std::future<void>> futs;
        int total = sweepN + 1;
        int chunk = (total + jobs - 1) / jobs;
        for (int t = 0; t < jobs; ++t) {
            int lo = t * chunk, hi = std::min(total, lo + chunk);
            if (lo >= hi) break;
            futs.push_back(std::async(std::launch::async, worker, lo, hi));
        }
        for (auto& f : futs) f.get();
    }

    // Step 4: smallest bound wins; ties go to the smallest offset.
    const SweepPoint* best = nullptr;
    for (const auto& pt : points) {
        res.sweepEvaluated += pt.feasible ? 1 : 0;
        if (!pt.negative) continue;
        if (!best || pt.p < best->p) best = &pt;
    }
    if (!best) {
        res.status = SynthStatus::NoCertificate;
        res.notes.push_back("every optimal initial value m0 was nonnegative");
        return res;
    }
    if (best->floored) res.notes.push_back("m0 minimization was unbounded; floored at -1e9");

    // Rebuild the winning system to extract the expression map.
    auto sys = genRepsmSystem(p, invariant, notPi, Rat(1), cMin + best->j);
    LpProblem& lp = sys->builder.problem();
    lp.objective = sys->m0Columns;
    if (best->floored) {
        SymLin floor = -sys->m0Columns;
        floor.constant -= Rat(1000000000);
        lp.addRow(std::move(floor), Rel::Le);
    }
    LpOutcome out = lpSolve(lp);
    if (!out.optimal() || out.value != best->m0)
        throw Error("internal: sweep re-solve disagreed with the recorded optimum", 4);

    res.status = SynthStatus::Ok;
    res.bestOffset = best->j;
    res.m0 = best->m0;
    res.p = best->p;
    res.cert.kind = CertKind::RepSm;
    res.cert.eps = 1;
    res.cert.c = cMin + best->j;
    res.cert.m0 = best->m0;
    res.cert.eta = sys->etaFromAssignment(p, out.assignment);
    res.cert.invariant = invariant;
    res.cert.target = notPi;
    return res;
}

RsmSynthResult synthesizeRsm(const Pcfg& p, const PredMap& invariant, const PredMap& target) {
    RsmSynthResult res;
    auto sys = genRsmSystem(p, invariant, target, Rat(1), std::nullopt);
    LpProblem& lp = sys->builder.problem();
    lp.objective = sys->m0Columns;
    LpOutcome out = lpSolve(lp);
    bool floored = false;
    if (out.status == LpOutcome::Status::Unbounded) {
        SymLin floor = -sys->m0Columns;
        lp.addRow(std::move(floor), Rel::Le);  // m0 >= 0: the time bound cannot be negative
        out = lpSolve(lp);
        floored = true;
        res.notes.push_back("m0 minimization was unbounded; floored at 0");
    }
    if (!out.optimal()) {
        res.status = SynthStatus::NoCertificate;
        return res;
    }
    Rat m0 = out.value;

    // Lexicographic second stage: fix m0, minimize the difference bound for a
    // tidy certificate.
    {
        SymLin fix = sys->m0Columns;
        fix.constant -= m0;
        lp.addRow(std::move(fix), Rel::Eq);
        lp.objective = SymLin::var(*sys->cColumn);
        LpOutcome out2 = lpSolve(lp);
        if (out2.optimal()) out = std::move(out2);
    }

    res.status = SynthStatus::Ok;
    res.cert.kind = CertKind::Rsm;
    res.cert.eps = 1;
    res.cert.c = out.assignment[static_cast<size_t>(*sys->cColumn)];
    res.cert.m0 = m0;
    res.cert.eta = sys->etaFromAssignment(p, out.assignment);
    res.cert.invariant = invariant;
    res.cert.target = target;
    res.expectedTimeBound = m0 < 0 && floored ? Rat(0) : m0;  // m0 / eps with eps = 1
    return res;
}

TemplateShape parseTemplateShape(const std::string& text, const Pcfg& p) {
    TemplateShape shape;
    std::istringstream in(text);
    std::string entry;
    while (std::getline(in, entry, ',')) {
        if (entry.empty()) continue;
        auto colon = entry.find(':');
        if (colon == std::string::npos) throw FormatError("template shape entry '" + entry + "' needs loc:conjuncts");
        std::string loc = entry.substr(0, colon);
        int l = p.locByName(loc);
        if (l < 0) throw FormatError("template shape: unknown location '" + loc + "'");
        std::vector<int> sizes;
        std::string rest = entry.substr(colon + 1);
        std::istringstream rs(rest);
        std::string piece;
        while (std::getline(rs, piece, '+')) {
            int k = std::stoi(piece);
            if (k < 0) throw FormatError("template shape: negative conjunct count");
            sizes.push_back(k);
        }
        if (sizes.empty()) throw FormatError("template shape entry '" + entry + "' needs at least one disjunct");
        shape[l] = sizes;
    }
    return shape;
}

namespace {

// Quadratic row: linear part over symbols plus products of symbol pairs.
struct QuadRow {
    std::map<int, Rat> linear;
    std::map<std::pair<int, int>, Rat> quad;
    Rat constant{0};
    Rel rel = Rel::Le;
};

struct QuadEmitter {
    SymbolTable syms;
    std::vector<QuadRow> rows;
    std::vector<int> multiplierSyms;
    std::set<int> siSyms;

    // conclusion <= 0 given symbolic premise rows, via fresh multipliers.
    void farkas(const std::vector<TRow>& premise, const TemplateExpr& conclusion, const std::string& tag) {
        std::vector<int> lambda;
        for (size_t i = 0; i < premise.size(); ++i) {
            int l = syms.intern("lam." + tag + "." + std::to_string(i));
            lambda.push_back(l);
            multiplierSyms.push_back(l);
            QuadRow nonneg;
            nonneg.linear[l] = -1;  // -lam <= 0
            rows.push_back(std::move(nonneg));
        }
        std::set<int> vars;
        for (const auto& r : premise)
            for (const auto& [v, s] : r.e.coeffs) vars.insert(v);
        for (const auto& [v, s] : conclusion.coeffs) vars.insert(v);

        for (int v : vars) {
            QuadRow row;
            row.rel = Rel::Eq;
            for (size_t i = 0; i < premise.size(); ++i) {
                SymLin alpha = premise[i].e.coeff(v);
                row.linear[lambda[i]] += alpha.constant;
                for (const auto& [s, q] : alpha.coeffs) {
                    auto key = std::minmax(lambda[i], s);
                    row.quad[{key.first, key.second}] += q;
                }
            }
            SymLin gamma = conclusion.coeff(v);
            row.constant -= gamma.constant;
            for (const auto& [s, q] : gamma.coeffs) row.linear[s] -= q;
            rows.push_back(std::move(row));
        }
        QuadRow crow;
        crow.constant = conclusion.constant.constant;
        for (const auto& [s, q] : conclusion.constant.coeffs) crow.linear[s] += q;
        for (size_t i = 0; i < premise.size(); ++i) {
            SymLin beta;  // constant part of the premise row
            beta.constant = premise[i].e.constant.constant;
            beta.coeffs = premise[i].e.constant.coeffs;
            crow.linear[lambda[i]] -= beta.constant;
            for (const auto& [s, q] : beta.coeffs) {
                auto key = std::minmax(lambda[i], s);
                crow.quad[{key.first, key.second}] -= q;
            }
        }
        rows.push_back(std::move(crow));
    }

    void print(std::ostream& out) const {
        for (int s = 0; s < syms.size(); ++s) out << "(declare " << syms.name(s) << ")\n";
        auto ratSexp = [](const Rat& q) {
            if (denominator(q) == 1) return numerator(q).str();
            return "(/ " + numerator(q).str() + " " + denominator(q).str() + ")";
        };
        for (const auto& r : rows) {
            out << "(assert (" << (r.rel == Rel::Le ? "<=" : "=") << " (+";
            for (const auto& [s, q] : r.linear)
                out << " (* " << ratSexp(q) << " " << syms.name(s) << ")";
            for (const auto& [pr, q] : r.quad)
                out << " (* " << ratSexp(q) << " " << syms.name(pr.first) << " " << syms.name(pr.second) << ")";
            out << " " << ratSexp(r.constant) << ") 0))\n";
        }
    }
};

} // namespace

QuadraticExportStats exportQuadraticSystem(const Pcfg& p, const PredMap& target,
                                           const TemplateShape& shape, const PredMap& pureInvariant,
                                           std::ostream& out) {
    QuadEmitter em;

    // Template predicate map: per location a DNF of symbolic conjunctions.
    auto siRow = [&](int loc, int d, int k) {
        TemplateExpr e;
        const std::string base = "si." + p.locations[static_cast<size_t>(loc)].name + "." +
                                 std::to_string(d) + "." + std::to_string(k);
        int b = em.syms.intern(base + ".b");
        em.siSyms.insert(b);
        e.constant = SymLin::var(b);
        for (int v = 0; v < p.vars.size(); ++v) {
            int s = em.syms.intern(base + "." + p.vars.name(v));
            em.siSyms.insert(s);
            e.setCoeff(v, SymLin::var(s));
        }
        return TRow{e, false};
    };

    TPredMap si;       // the symbolic map itself
    si.at.resize(static_cast<size_t>(p.numLocations()));
    TPredMap notSi;    // its locationwise complement (strict rows relaxed)
    notSi.at.resize(static_cast<size_t>(p.numLocations()));
    for (int l = 0; l < p.numLocations(); ++l) {
        auto it = shape.find(l);
        if (it == shape.end() || (it->second.size() == 1 && it->second[0] == 0)) {
            si.at[static_cast<size_t>(l)].push_back({});  // true
            // complement is false: no disjuncts
            continue;
        }
        const auto& sizes = it->second;
        std::vector<std::vector<TRow>> disjuncts;
        for (size_t d = 0; d < sizes.size(); ++d) {
            std::vector<TRow> rows;
            for (int k = 0; k < sizes[d]; ++k) rows.push_back(siRow(l, static_cast<int>(d), k));
            disjuncts.push_back(std::move(rows));
        }
        si.at[static_cast<size_t>(l)] = disjuncts;
        // not (or_d and_k e_dk <= 0) = and_d or_k e_dk > 0; distribute to DNF
        // over one row choice per disjunct, each relaxed to -e <= 0.
        std::vector<std::vector<TRow>> combos{{}};
        for (const auto& dRows : disjuncts) {
            std::vector<std::vector<TRow>> next;
            for (const auto& combo : combos)
                for (const auto& row : dRows) {
                    auto ext = combo;
                    ext.push_back(TRow{-row.e, false});
                    next.push_back(std::move(ext));
                    if (next.size() > kDefaultDnfCap)
                        throw BlowupLimitError("template complement exceeds the DNF cap");
                }
            combos = std::move(next);
        }
        notSi.at[static_cast<size_t>(l)] = std::move(combos);
    }

    // System 1: ranking obligations for the concrete target, supported by the
    // symbolic map.
    {
        SymbolTable s1syms;
        std::vector<TemplateExpr> eta1raw = makeTemplates(p, s1syms, "r.");
        std::vector<TemplateExpr> eta1;
        for (auto& t : eta1raw) {
            TemplateExpr u;
            u.constant = SymLin::var(em.syms.intern(s1syms.name(t.constant.coeffs.begin()->first)));
            for (auto& [v, sl] : t.coeffs)
                u.setCoeff(v, SymLin::var(em.syms.intern(s1syms.name(sl.coeffs.begin()->first))));
            eta1.push_back(std::move(u));
        }
        int eps1 = em.syms.intern("eps1");
        int c1 = em.syms.intern("c1");
        TPredMap tgt = TPredMap::fromPredMap(target, p);
        PredMap notTargetMap = PredMap::top();
        for (int l = 0; l < p.numLocations(); ++l) notTargetMap.set(l, negatePlp(target(l)));
        TPredMap notTgt = TPredMap::fromPredMap(notTargetMap, p);
        ObligationGenOptions opts;
        opts.mode = CertKind::Rsm;
        opts.dropVacuous = false;
        auto obs = generateObligations(p, eta1, si, tgt, notTgt,
                                       TemplateExpr::symbolic(SymLin::var(eps1)),
                                       TemplateExpr::symbolic(SymLin::var(c1)), opts);
        int i = 0;
        for (const auto& ob : obs) em.farkas(ob.premise, ob.conclusion, "r" + std::to_string(i++));
        QuadRow epsRow;  // 1 - eps1 <= 0
        epsRow.linear[eps1] = -1;
        epsRow.constant = 1;
        em.rows.push_back(epsRow);
        QuadRow cRow;  // eps1 - c1 <= 0
        cRow.linear[eps1] = 1;
        cRow.linear[c1] = -1;
        em.rows.push_back(cRow);
    }

    // System 2: repulsing obligations for the complement of the symbolic map,
    // supported by the concrete pure invariant.
    {
        SymbolTable s2syms;
        std::vector<TemplateExpr> eta2raw = makeTemplates(p, s2syms, "q.");
        std::vector<TemplateExpr> eta2;
        for (auto& t : eta2raw) {
            TemplateExpr u;
            u.constant = SymLin::var(em.syms.intern(s2syms.name(t.constant.coeffs.begin()->first)));
            for (auto& [v, sl] : t.coeffs)
                u.setCoeff(v, SymLin::var(em.syms.intern(s2syms.name(sl.coeffs.begin()->first))));
            eta2.push_back(std::move(u));
        }
        int eps2 = em.syms.intern("eps2");
        int c2 = em.syms.intern("c2");
        TPredMap inv = TPredMap::fromPredMap(pureInvariant, p);
        ObligationGenOptions opts;
        opts.mode = CertKind::RepSm;
        opts.dropVacuous = false;
        auto obs = generateObligations(p, eta2, inv, notSi, si,
                                       TemplateExpr::symbolic(SymLin::var(eps2)),
                                       TemplateExpr::symbolic(SymLin::var(c2)), opts);
        int i = 0;
        for (const auto& ob : obs) em.farkas(ob.premise, ob.conclusion, "q" + std::to_string(i++));
        QuadRow epsRow;
        epsRow.linear[eps2] = -1;
        epsRow.constant = 1;
        em.rows.push_back(epsRow);
        QuadRow cRow;
        cRow.linear[eps2] = 1;
        cRow.linear[c2] = -1;
        em.rows.push_back(cRow);
    }

    em.print(out);

    QuadraticExportStats st;
    st.symbols = em.syms.size();
    st.siCoefficients = static_cast<int>(em.siSyms.size());
    st.multipliers = static_cast<int>(em.multiplierSyms.size());
    st.asserts = static_cast<int>(em.rows.size());
    std::set<int> multiplierSet(em.multiplierSyms.begin(), em.multiplierSyms.end());
    for (const auto& r : em.rows)
        for (const auto& [pr, q] : r.quad) {
            ++st.quadraticMonomials;
            bool ok = (multiplierSet.count(pr.first) && em.siSyms.count(pr.second)) ||
                      (multiplierSet.count(pr.second) && em.siSyms.count(pr.first));
            if (!ok) st.allQuadraticAreMultiplierTimesSi = false;
        }
    return st;
}

} // namespace stochinv
