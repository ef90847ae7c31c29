#include "stochinv/sim.hpp"

#include "stochinv/polyhedra.hpp"

#include <boost/math/distributions/beta.hpp>

#include <cmath>
#include <future>
#include <random>

namespace stochinv {

namespace {

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double u01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Precompiled step tables so the inner loop avoids repeated lookups.
struct Compiled {
    struct Trans {
        int target, var;
        const Update* update;
        const Plp* guard;
        double prob;     // cumulative threshold for prob locations
        Rat probExact;
        // fast paths for the common shapes
        enum class GuardFast { None, True, SingleLe };  // coeff*x[var] + k <= 0 (or < 0)
        GuardFast gfast = GuardFast::None;
        int gvar = 0;
        Rat gbound{0};   // threshold for x[gvar]
        bool gflip = false;   // compare >= instead of <=
        bool gstrict = false;
        enum class UpdFast { None, Shift, SetConst };  // x[var] += k / x[var] = k
        UpdFast ufast = UpdFast::None;
        Rat uconst{0};
    };
    struct Loc {
        LocKind kind;
        bool terminal;
        std::vector<Trans> out;
        const Plp* event = nullptr;  // null or the event predicate
        bool eventTrue = false, eventFalse = false;
    };
    std::vector<Loc> locs;
    std::vector<const DistributionSpec*> distOf;  // per transition flattened? resolved in Trans

    explicit Compiled(const Pcfg& p, const PredMap* event) {
        locs.resize(static_cast<size_t>(p.numLocations()));
        for (int l = 0; l < p.numLocations(); ++l) {
            auto& L = locs[static_cast<size_t>(l)];
            L.kind = p.locations[static_cast<size_t>(l)].kind;
            L.terminal = p.locations[static_cast<size_t>(l)].terminal;
            double acc = 0;
            for (int ti : p.outgoing(l)) {
                const auto& t = p.transitions[static_cast<size_t>(ti)];
                Trans ct;
                ct.target = t.target;
                ct.var = t.var;
                ct.update = &t.update;
                ct.guard = t.guard ? &*t.guard : nullptr;
                ct.probExact = t.prob ? *t.prob : Rat(0);
                acc += t.prob ? static_cast<double>(*t.prob) : 0.0;
                ct.prob = acc;
                if (ct.guard) {
                    if (ct.guard->isTrue()) {
                        ct.gfast = Trans::GuardFast::True;
                    } else if (ct.guard->disjuncts.size() == 1 && ct.guard->disjuncts[0].size() == 1 &&
                               ct.guard->disjuncts[0][0].expr.coeffs.size() == 1)
                    {
                        const LinearConstraint& c = ct.guard->disjuncts[0][0];
                        Rat a = c.expr.coeffs.begin()->second;
                        ct.gfast = Trans::GuardFast::SingleLe;
                        ct.gvar = c.expr.coeffs.begin()->first;
                        ct.gbound = -c.expr.constant / a;
                        ct.gflip = a < 0;  // x >= bound
                        ct.gstrict = c.strict;
                    }
                }
                if (t.update.kind == Update::Kind::Affine) {
                    const AffineExpr& e = t.update.expr;
                    if (e.coeffs.empty()) {
                        ct.ufast = Trans::UpdFast::SetConst;
                        ct.uconst = e.constant;
                    } else if (e.coeffs.size() == 1 && e.coeffs.begin()->first == t.var &&
                               e.coeffs.begin()->second == 1)
                    {
                        ct.ufast = Trans::UpdFast::Shift;
                        ct.uconst = e.constant;
                    }
                }
                L.out.push_back(ct);
            }
            if (event) {
                const Plp& e = (*event)(l);
                L.event = &e;
                L.eventTrue = e.isTrue();
                L.eventFalse = e.isFalse();
            }
        }
    }
};

// Realizes some distribution consistent with the declared support: uniform
// on an interval support, the mean-matching two-point law on a two-point
// support, and otherwise a length-weighted uniform mixture over the support
// intervals (the mean of a hand-declared distribution is then approximated,
// which is fine for the violation-frequency probes but reported nowhere as
// exact).
struct DistSampler {
    enum class Kind { Uniform, Dirac, TwoPoint, Mixture } kind = Kind::Dirac;
    Rat a{0}, b{0};  // uniform bounds / point / two points
    Rat pA{1};       // P(first point) for two-point distributions
    std::vector<std::pair<Rat, Rat>> pieces;  // Mixture intervals
    std::vector<double> pieceCdf;

    static DistSampler compile(const DistributionSpec& d) {
        DistSampler s;
        auto mn = d.supportMin(), mx = d.supportMax();
        if (mn && mx && *mn == *mx) {
            s.kind = Kind::Dirac;
            s.a = *mn;
            return s;
        }
        if (!mn || !mx)
            throw UnboundedChooseError("cannot simulate a distribution with unbounded support: " + d.id);
        // Per-disjunct interval hulls.
        std::vector<std::pair<Rat, Rat>> pieces;
        for (const auto& disj : d.support.disjuncts) {
            if (!satisfiableClosure(closure(disj))) continue;
            DistributionSpec one;
            one.support = Plp::single(disj);
            auto lo = one.supportMin(), hi = one.supportMax();
            if (!lo || !hi)
                throw UnboundedChooseError("cannot simulate a distribution with unbounded support: " + d.id);
            pieces.emplace_back(*lo, *hi);
        }
        if (pieces.size() == 1) {
            s.kind = Kind::Uniform;
            s.a = pieces[0].first;
            s.b = pieces[0].second;
            return s;
        }
        if (pieces.size() == 2 && pieces[0].first == pieces[0].second &&
            pieces[1].first == pieces[1].second)
        {
            s.kind = Kind::TwoPoint;
            s.a = pieces[0].first;
            s.b = pieces[1].first;
            s.pA = (d.mean - s.b) / (s.a - s.b);
            return s;
        }
        s.kind = Kind::Mixture;
        s.pieces = pieces;
        double total = 0;
        for (const auto& [lo, hi] : pieces) total += static_cast<double>(hi - lo);
        double acc = 0;
        for (const auto& [lo, hi] : pieces) {
            acc += total > 0 ? static_cast<double>(hi - lo) / total : 1.0 / static_cast<double>(pieces.size());
            s.pieceCdf.push_back(acc);
        }
        return s;
    }

    Rat draw(std::mt19937_64& rng) const {
        switch (kind) {
            case Kind::Dirac: return a;
            case Kind::TwoPoint: return u01(rng) < static_cast<double>(pA) ? a : b;
            case Kind::Uniform: {
                // dyadic rational uniform in [a, b]
                constexpr uint64_t kDen = 1ULL << 32;
                Rat u(rng() >> 32, kDen);
                return a + (b - a) * u;
            }
            case Kind::Mixture: {
                double u = u01(rng);
                size_t k = 0;
                while (k + 1 < pieces.size() && u >= pieceCdf[k]) ++k;
                constexpr uint64_t kDen = 1ULL << 32;
                Rat v(rng() >> 32, kDen);
                return pieces[k].first + (pieces[k].second - pieces[k].first) * v;
            }
        }
        return a;
    }
};

struct RunContext {
    const Pcfg& p;
    const Compiled& comp;
    const SchedulerPolicy& policy;
    std::map<std::string, DistSampler> samplers;

    explicit RunContext(const Pcfg& p_, const Compiled& c, const SchedulerPolicy& pol)
        : p(p_), comp(c), policy(pol) {
        for (const auto& [id, d] : p.dists.all()) samplers.emplace(id, DistSampler::compile(d));
    }
};

Rat chooseValue(const SetSpec& set, const SchedulerPolicy& policy, std::mt19937_64& rng) {
    if (set.intervals.empty()) throw UnboundedChooseError("empty choose set");
    if (policy.choose == SchedulerPolicy::ChooseRule::FixedEndpoint) {
        const auto& iv = set.intervals.front();
        if (iv.lo) return *iv.lo;
        if (iv.hi) return *iv.hi;
        throw UnboundedChooseError("choose set unbounded under the fixed-endpoint rule");
    }
    size_t k = set.intervals.size() == 1 ? 0 : rng() % set.intervals.size();
    const auto& iv = set.intervals[static_cast<size_t>(k)];
    if (!iv.lo || !iv.hi) throw UnboundedChooseError("choose set unbounded under the uniform rule");
    if (iv.integral) {
        Int lo = ratCeil(*iv.lo);
        Int hi = -ratCeil(-*iv.hi);  // floor
        if (lo > hi) throw UnboundedChooseError("empty integral choose interval");
        Int span = hi - lo + 1;
        Int pick = lo + Int(rng() % static_cast<uint64_t>(span.convert_to<long long>()));
        return Rat(pick);
    }
    constexpr uint64_t kDen = 1ULL << 32;
    Rat u(rng() >> 32, kDen);
    return *iv.lo + (*iv.hi - *iv.lo) * u;
}

RunOutcome runCompiled(const RunContext& ctx, long long maxSteps, uint64_t seed, bool hasEvent,
                       size_t* scriptPos) {
    std::mt19937_64 rng(splitmix64(seed));
    int loc = ctx.p.initLoc;
    std::vector<Rat> x = ctx.p.initVal;
    size_t localScript = 0;
    if (!scriptPos) scriptPos = &localScript;

    for (long long step = 0;; ++step) {
        const auto& L = ctx.comp.locs[static_cast<size_t>(loc)];
        if (hasEvent) {
            bool hit = L.eventTrue || (!L.eventFalse && L.event->holdsAt(x));
            if (hit) return RunOutcome{RunOutcome::Kind::EventHit, step};
        }
        if (L.terminal) return RunOutcome{RunOutcome::Kind::Terminated, step};
        if (step >= maxSteps) return RunOutcome{RunOutcome::Kind::Censored, step};

        const Compiled::Trans* chosen = nullptr;
        switch (L.kind) {
            case LocKind::Det: {
                for (const auto& t : L.out) {
                    bool enabled;
                    switch (t.gfast) {
                        case Compiled::Trans::GuardFast::True:
                            enabled = true;
                            break;
                        case Compiled::Trans::GuardFast::SingleLe: {
                            const Rat& xv = x[static_cast<size_t>(t.gvar)];
                            int cmp = xv.compare(t.gbound);
                            enabled = t.gflip ? (t.gstrict ? cmp > 0 : cmp >= 0)
                                              : (t.gstrict ? cmp < 0 : cmp <= 0);
                            break;
                        }
                        default:
                            enabled = !t.guard || t.guard->holdsAt(x);
                    }
                    if (enabled) { chosen = &t; break; }
                }
                if (!chosen) throw GuardGapError("no guard enabled during simulation");
                break;
            }
            case LocKind::Prob: {
                double u = u01(rng);
                chosen = &L.out.back();
                for (const auto& t : L.out)
                    if (u < t.prob) { chosen = &t; break; }
                break;
            }
            case LocKind::Nondet: {
                size_t k = 0;
                switch (ctx.policy.ndet) {
                    case SchedulerPolicy::NdetRule::UniformRandom:
                        k = rng() % L.out.size();
                        break;
                    case SchedulerPolicy::NdetRule::FirstListed:
                        k = 0;
                        break;
                    case SchedulerPolicy::NdetRule::Scripted:
                        if (ctx.policy.script.empty()) throw Error("scripted policy without a script", 2);
                        k = static_cast<size_t>(ctx.policy.script[*scriptPos % ctx.policy.script.size()]) %
                            L.out.size();
                        ++*scriptPos;
                        break;
                }
                chosen = &L.out[k];
                break;
            }
        }

        switch (chosen->update->kind) {
            case Update::Kind::Identity:
                break;
            case Update::Kind::Affine:
                if (chosen->ufast == Compiled::Trans::UpdFast::Shift)
                    x[static_cast<size_t>(chosen->var)] += chosen->uconst;
                else if (chosen->ufast == Compiled::Trans::UpdFast::SetConst)
                    x[static_cast<size_t>(chosen->var)] = chosen->uconst;
                else
                    x[static_cast<size_t>(chosen->var)] = chosen->update->expr.eval(x);
                break;
            case Update::Kind::Sample: {
                Rat v = ctx.samplers.at(chosen->update->distId).draw(rng);
                if (!chosen->update->expr.isZero()) v += chosen->update->expr.eval(x);
                x[static_cast<size_t>(chosen->var)] = v;
                break;
            }
            case Update::Kind::Choose:
                x[static_cast<size_t>(chosen->var)] = chooseValue(chosen->update->set, ctx.policy, rng);
                break;
        }
        loc = chosen->target;
    }
}

} // namespace

RunOutcome runOne(const Pcfg& p, const SchedulerPolicy& policy, long long maxSteps, uint64_t seed,
                  const PredMap* event) {
    if (maxSteps < 1) throw PreconditionError("maxSteps must be >= 1");
    Compiled comp(p, event);
    RunContext ctx(p, comp, policy);
    return runCompiled(ctx, maxSteps, seed, event != nullptr, nullptr);
}

double clopperPearsonLower(long long hits, long long runs, double level) {
    if (hits <= 0) return 0.0;
    boost::math::beta_distribution<double> beta(static_cast<double>(hits),
                                                static_cast<double>(runs - hits + 1));
    return boost::math::quantile(beta, 1.0 - level);
}

std::pair<double, double> clopperPearsonInterval(long long hits, long long runs, double confidence) {
    double alpha = 1.0 - confidence;
    double lo = 0.0, hi = 1.0;
    if (hits > 0) {
        boost::math::beta_distribution<double> bl(static_cast<double>(hits),
                                                  static_cast<double>(runs - hits + 1));
        lo = boost::math::quantile(bl, alpha / 2);
    }
    if (hits < runs) {
        boost::math::beta_distribution<double> bh(static_cast<double>(hits + 1),
                                                  static_cast<double>(runs - hits));
        hi = boost::math::quantile(bh, 1.0 - alpha / 2);
    }
    return {lo, hi};
}

Estimate estimate(const Pcfg& p, const SchedulerPolicy& policy, const PredMap* event, long long runs,
                  long long maxSteps, uint64_t seed, double confidence, int jobs,
                  std::vector<RunOutcome>* outcomes) {
    if (runs < 1) throw PreconditionError("runs must be >= 1");
    if (confidence <= 0 || confidence >= 1) throw PreconditionError("confidence must lie in (0,1)");
    Compiled comp(p, event);
    RunContext ctx(p, comp, policy);

    std::vector<RunOutcome> local(static_cast<size_t>(runs));
    auto worker = [&](long long lo, long long hi) {
        for (long long i = lo; i < hi; ++i)
            local[static_cast<size_t>(i)] =
                runCompiled(ctx, maxSteps, splitmix64(seed) ^ static_cast<uint64_t>(i), event != nullptr, nullptr);
    };
    if (jobs <= 1) {
        worker(0, runs);
    } else {
        std::vector<std::future<void>> futs;
        long long chunk = (runs + jobs - 1) / jobs;
        for (int t = 0; t < jobs; ++t) {
            long long lo = t * chunk, hi = std::min(runs, lo + chunk);
            if (lo >= hi) break;
            futs.push_back(std::async(std::launch::async, worker, lo, hi));
        }
        for (auto& f : futs) f.get();
    }

    Estimate est;
    est.runs = runs;
    est.confidence = confidence;
    long long stepsSum = 0;
    for (const auto& o : local) {
        switch (o.kind) {
            case RunOutcome::Kind::EventHit: ++est.eventHits; break;
            case RunOutcome::Kind::Terminated:
                ++est.terminated;
                stepsSum += o.steps;
                break;
            case RunOutcome::Kind::Censored: ++est.censored; break;
        }
    }
    est.frequency = static_cast<double>(est.eventHits) / static_cast<double>(runs);
    auto [lo, hi] = clopperPearsonInterval(est.eventHits, runs, confidence);
    est.ciLow = lo;
    est.ciHigh = hi;
    est.meanTerminatedSteps =
        est.terminated ? static_cast<double>(stepsSum) / static_cast<double>(est.terminated) : 0.0;
    if (outcomes) *outcomes = std::move(local);
    return est;
}

std::string outcomeKindName(RunOutcome::Kind k) {
    switch (k) {
        case RunOutcome::Kind::Terminated: return "terminated";
        case RunOutcome::Kind::EventHit: return "event";
        case RunOutcome::Kind::Censored: return "censored";
    }
    return "?";
}

} // namespace stochinv
