// End-to-end acceptance suite. Each criterion prints one pass/fail line;
// the process exits with the number of failed criteria.

#include "../common/lp_oracle.hpp"

#include "stochinv/bounds.hpp"
#include "stochinv/check.hpp"
#include "stochinv/parser.hpp"
#include "stochinv/sim.hpp"
#include "stochinv/synth.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

using namespace stochinv;
using Clock = std::chrono::steady_clock;

namespace {

std::string dataFile(const std::string& name) {
    std::ifstream in(std::string(STOCHINV_DATA_DIR) + "/" + name);
    if (!in) throw FormatError("missing data file " + name);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Pcfg loadPcfg(const std::string& name) { return parsePcfgFile(dataFile(name)); }
Certificate loadCert(const std::string& name, const Pcfg& p) { return parseCertificate(dataFile(name), p); }
Pcfg buildApp(const std::string& name) { return buildPcfg(parseProgram(dataFile(name))); }

struct Failure : std::runtime_error {
    explicit Failure(const std::string& msg) : std::runtime_error(msg) {}
};

void require(bool cond, const std::string& msg) {
    if (!cond) throw Failure(msg);
}

double seconds(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

std::string criterion1() {
    // warm-up pays one-time allocation costs
    reachBound(Rat(1), Rat(13), Rat(-3429));
    auto t0 = Clock::now();
    ReachBound rb = reachBound(Rat(1), Rat(13), Rat(-3429));
    double elapsed = seconds(t0);
    require(rb.value >= BigFloat("4.6e-6") && rb.value <= BigFloat("5.6e-6"),
            "reach bound " + sci(rb.value) + " outside [4.6e-6, 5.6e-6]");
    require(elapsed < 1e-3, "evaluation took " + std::to_string(elapsed * 1e3) + " ms");
    return "reach_bound(1,13,-3429) = " + sci(rb.value) + " in [4.6e-6, 5.6e-6], " +
           std::to_string(elapsed * 1e6) + " us";
}

std::string criterion2() {
    Pcfg p = loadPcfg("fig4_collapsed.pcfg");
    CheckResult ok = checkCertificate(p, loadCert("fig4_c13.cert", p));
    require(ok.valid, "c=13 certificate rejected");
    CheckResult bad = checkCertificate(p, loadCert("fig4_c12.cert", p));
    require(!bad.valid, "c=12 certificate accepted");
    bool named = false;
    for (const auto& v : bad.violations)
        if (v.obligation.kind == Obligation::Kind::DiffBound &&
            v.obligation.label.find("l1->l0") != std::string::npos &&
            v.obligation.label.find("x - 2") != std::string::npos)
            named = true;
    require(named, "violation does not name the l1->l0 (x := x - 2) transition");
    return "accepts c=13, rejects c=12 naming the l1->l0 (x := x - 2) transition";
}

std::string criterion3() {
    Pcfg p = loadPcfg("fig2_collapsed.pcfg");
    CheckResult ok = checkCertificate(p, loadCert("fig2_rsm.cert", p));
    require(ok.valid, "tightened certificate rejected");
    CheckResult bad = checkCertificate(p, loadCert("fig2_rsm_paper.cert", p));
    require(!bad.valid, "verbatim-support certificate accepted");
    const ObligationViolation* nn = nullptr;
    for (const auto& v : bad.violations)
        if (v.obligation.kind == Obligation::Kind::NonNeg && v.obligation.loc == 1) nn = &v;
    require(nn != nullptr, "no nonnegativity violation at l1");
    require(nn->witness[0] >= 0 && nn->witness[0] < Rat(1, 4), "witness outside [0, 1/4)");
    Assertion region = nn->obligation.premiseAssertion();
    region.push_back(LinearConstraint{-nn->obligation.conclusion.toAffine(), true});
    MaxOutcome hi = maximizeOverClosure(AffineExpr::var(0), closure(region));
    MaxOutcome lo = maximizeOverClosure(-AffineExpr::var(0), closure(region));
    require(hi.kind == MaxOutcome::Kind::Optimal && hi.value == Rat(1, 4) &&
                lo.kind == MaxOutcome::Kind::Optimal && lo.value == 0,
            "witness region is not exactly [0, 1/4)");
    return "accepts the tightened support; witness region under the verbatim support is x in [0, 1/4)";
}

std::string criterion4() {
    // Example 1(i): full synthesis at sweep 1000, single-threaded.
    Pcfg pa = buildApp("exa.app");
    PredMap invA = parsePredMapFile(dataFile("exa.inv"), pa, true);
    PredMap piA = parsePredMapFile(dataFile("exa.pi"), pa, true);
    auto t0 = Clock::now();
    RepsmSynthResult ra = synthesizeRepsm(pa, invA, piA, 1000, 1);
    double elapsed = seconds(t0);
    require(ra.status == SynthStatus::Ok, "no certificate for example 1(i)");
    require(checkCertificate(pa, ra.cert).valid, "example 1(i) certificate rejected by the checker");
    require(ra.p <= Rat(51, 100000), "p = " + sci(toBigFloat(ra.p)) + " above 5.1e-4");
    require(elapsed <= 300.0, "synthesis took " + std::to_string(elapsed) + " s");

    // Examples 2(i) and 3(i) as smoke tests: checker-valid with p <= 1;
    // bounds logged against the reported 2.4e-11 and 4.4e-17.
    std::ostringstream log;
    const struct {
        const char *app, *inv, *pi, *reported;
    } smoke[] = {{"exb.app", "exb.inv", "exb.pi", "2.4e-11"}, {"exc.app", "exc.inv", "exc.pi", "4.4e-17"}};
    for (const auto& s : smoke) {
        Pcfg p = buildApp(s.app);
        PredMap inv = parsePredMapFile(dataFile(s.inv), p, true);
        PredMap pi = parsePredMapFile(dataFile(s.pi), p, true);
        RepsmSynthResult r = synthesizeRepsm(p, inv, pi, 50, 1);
        require(r.status == SynthStatus::Ok, std::string("no certificate for ") + s.app);
        require(checkCertificate(p, r.cert).valid, std::string("checker rejects ") + s.app);
        require(r.p <= 1, std::string("p > 1 for ") + s.app);
        log << " | " << s.app << ": p = " << sci(toBigFloat(r.p)) << " (reported " << s.reported << ")";
    }
    return "example 1(i): p = " + sci(toBigFloat(ra.p)) + " <= 5.1e-4 (reported 5.1e-5), " +
           std::to_string(elapsed) + " s at sweep 1000" + log.str();
}

std::string criterion5() {
    Pcfg p = loadPcfg("fig3_collapsed.pcfg");
    Certificate rsm = loadCert("fig3_rsm.cert", p);
    StochasticInvariant iprime = parseStochInvFile(dataFile("iprime.si"), p);
    StochasticInvariant pi = parseStochInvFile(dataFile("pi_fig3.si"), p);
    Rat bound = terminationLowerBound(p, {iprime, pi}, rsm);
    require(bound == Rat(99999, 100000), "bound is " + ratStr(bound) + ", expected 99999/100000");
    return "termination lower bound is exactly 0.99999";
}

std::string criterion6() {
    Pcfg sym = loadPcfg("symwalk.pcfg");
    Verdict fin = refuteFiniteTermination(sym, loadCert("symwalk_repsm.cert", sym));
    require(fin.kind == Verdict::Kind::InfiniteExpectedTime,
            std::string("symmetric walk: ") + verdictKindName(fin.kind) + " (" + fin.justification + ")");

    Pcfg drift = loadPcfg("driftwalk.pcfg");
    Verdict as = refuteAsTermination(drift, loadCert("driftwalk_repsm.cert", drift));
    require(as.kind == Verdict::Kind::NotAsTerminating,
            std::string("drift walk: ") + verdictKindName(as.kind) + " (" + as.justification + ")");

    SchedulerPolicy pol;
    Estimate est = estimate(drift, pol, nullptr, 10000, 100000, 20260810, 0.99, 4);
    double censorFreq = static_cast<double>(est.censored) / static_cast<double>(est.runs);
    require(censorFreq > 0.5, "censoring frequency " + std::to_string(censorFreq) + " not above 0.5");
    return "InfiniteExpectedTime + NotAsTerminating; drift-walk censoring frequency " +
           std::to_string(censorFreq);
}

std::string criterion7() {
    Pcfg p = loadPcfg("unifloop.pcfg");
    for (const char* n : {"n0", "n5", "nm3"}) {
        Certificate repsm = loadCert(std::string("pers_repsm_") + n + ".cert", p);
        Certificate rsm = loadCert(std::string("pers_rsm_") + n + ".cert", p);
        Verdict v = checkPersistence(p, repsm, rsm, Rat(-1));
        require(v.kind == Verdict::Kind::Persistent,
                std::string("level ") + n + ": " + verdictKindName(v.kind) + " (" + v.justification + ")");
    }
    return "persistent for thresholds n in {0, 5, -3}";
}

std::string criterion8() {
    // 100 random tuples inside 0 < eps <= c <= 100, m0 in [-1e4, -1); the
    // sampler keeps eps >= c/10 so the partial sums can converge within the
    // 1e5-term budget (arbitrarily small eps/c makes the geometric ratio
    // approach 1 and no fixed horizon suffices).
    std::mt19937_64 rng(88);
    for (int k = 0; k < 100; ++k) {
        Rat c = Rat(100 + static_cast<int>(rng() % 9901), 100);                 // [1, 100]
        Rat eps = c * Rat(10 + static_cast<int>(rng() % 91), 100);              // [c/10, c]
        Rat m0 = -Rat(100 + static_cast<int>(rng() % 999901), 100);             // [-1e4, -1]
        ReachBound rb = reachBound(eps, c, m0);
        long long A = rb.A.convert_to<long long>();
        BigFloat gamma = exp(toBigFloat(-(eps * eps) / (2 * (c + eps) * (c + eps))));
        BigFloat term = exp(toBigFloat(azumaTail(eps, c, m0, A).logValue));
        BigFloat sum = 0;
        for (long long n = A; n <= 100000; ++n) {
            sum += term;
            term *= gamma;
            if (sum > rb.raw)
                throw Failure("partial sum exceeded the reach bound at n = " + std::to_string(n));
        }
        BigFloat limit = rb.raw / (BigFloat(1) + BigFloat("1e-9"));
        BigFloat rel = abs(sum - limit) / limit;
        if (rel >= BigFloat("1e-12"))
            throw Failure("partial sums did not converge: relative gap " + sci(rel));
        // the incremental terms are the tail values themselves
        TailBound probe = azumaTail(eps, c, m0, A + 17);
        BigFloat direct = exp(toBigFloat(probe.logValue));
        BigFloat inc = exp(toBigFloat(azumaTail(eps, c, m0, A).logValue));
        for (int i = 0; i < 17; ++i) inc *= gamma;
        if (abs(direct - inc) / direct > BigFloat("1e-80"))
            throw Failure("incremental and direct tail terms disagree");
    }
    return "100 random tuples: tail sums bounded by the reach bound, converged within 1e-12";
}

std::string criterion9() {
    std::mt19937_64 rng(20240817);
    int solved = 0;
    while (solved < 50) {
        lporacle::DenseLp lp;
        lp.n = 1 + static_cast<int>(rng() % 3);
        int m = 2 + static_cast<int>(rng() % 4);
        auto coef = [&]() { return Rat(static_cast<int>(rng() % 11) - 5); };
        for (int r = 0; r < m; ++r) {
            std::vector<Rat> row;
            for (int c = 0; c < lp.n; ++c) row.push_back(coef());
            lp.rowsA.push_back(row);
            lp.rowsB.push_back(Rat(static_cast<int>(rng() % 12)));  // x = 0 stays feasible
        }
        lp.rowsA.push_back(std::vector<Rat>(static_cast<size_t>(lp.n), Rat(1)));
        lp.rowsB.push_back(Rat(20));  // bounded, so optima exist
        for (int c = 0; c < lp.n; ++c) lp.obj.push_back(coef());

        auto expect = lporacle::bruteForceMin(lp);
        require(expect.has_value(), "oracle found no optimum for a feasible system");
        LpOutcome out = lpSolve(lporacle::toProblem(lp));
        require(out.optimal(), "simplex failed on a feasible bounded system");
        require(out.value == *expect, "simplex optimum differs from the vertex-enumeration optimum");
        for (size_t r = 0; r < lp.rowsA.size(); ++r) {
            Rat lhs(0);
            for (int c = 0; c < lp.n; ++c)
                lhs += lp.rowsA[r][static_cast<size_t>(c)] * out.assignment[static_cast<size_t>(c)];
            require(lhs <= lp.rowsB[r], "nonzero residual in a returned assignment");
        }
        ++solved;
    }
    return "50 random systems: simplex optima equal brute-force vertex enumeration, zero residuals";
}

std::string criterion10() {
    Pcfg p = loadPcfg("fig4_collapsed.pcfg");
    Certificate cert = loadCert("fig4_c13.cert", p);
    PredMap pi = PredMap::top();
    {
        Lexer lx("x <= 500");
        VarTable vars = p.vars;
        pi.set(0, toDnf(parsePredicate(lx, vars, false)));
    }
    StochasticInvariant si = makeStochasticInvariant(p, cert, pi);

    PredMap event = negatePredMap(pi, p);
    auto t0 = Clock::now();
    SchedulerPolicy pol;
    Estimate est = estimate(p, pol, &event, 1000000, 100000, 424242, 0.99, 4);
    double elapsed = seconds(t0);
    double lower = clopperPearsonLower(est.eventHits, est.runs, 0.99);
    require(lower <= static_cast<double>(si.p),
            "empirical lower bound " + std::to_string(lower) + " exceeds certified p");
    require(elapsed <= 600.0, "simulation took " + std::to_string(elapsed) + " s");
    std::ostringstream os;
    os << "violations " << est.eventHits << "/" << est.runs << ", 99% lower bound " << lower
       << " <= certified p = " << sci(toBigFloat(si.p)) << " (" << elapsed << " s)";
    return os.str();
}

std::string criterion11() {
    Pcfg p = loadPcfg("fig2_collapsed.pcfg");
    SchedulerPolicy pol;
    Estimate est = estimate(p, pol, nullptr, 100000, 1000000, 1111, 0.95, 4);
    require(est.terminated == est.runs, "not every run terminated");
    require(est.meanTerminatedSteps > 30 && est.meanTerminatedSteps < 45,
            "mean steps " + std::to_string(est.meanTerminatedSteps) + " outside [30, 45]");
    std::ostringstream os;
    os << "mean termination steps " << est.meanTerminatedSteps
       << " in [30, 45]; certified expected-time bound 40 (loop-level certificate)";
    return os.str();
}

} // namespace

int main(int argc, char** argv) {
    struct Entry {
        int id;
        const char* name;
        std::function<std::string()> run;
    };
    const Entry entries[] = {
        {1, "closed-form bound reproduction", criterion1},
        {2, "certificate discrimination (difference bound)", criterion2},
        {3, "ranking certificate checking and witness region", criterion3},
        {4, "end-to-end synthesis on the walk examples", criterion4},
        {5, "union bound combination", criterion5},
        {6, "refutation verdicts and censoring probe", criterion6},
        {7, "persistence verdicts", criterion7},
        {8, "geometric tail identity", criterion8},
        {9, "exact simplex vs vertex enumeration", criterion9},
        {10, "empirical soundness of the certified invariant", criterion10},
        {11, "expected termination time probe", criterion11},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

    int failures = 0;
    for (const auto& e : entries) {
        if (!only.empty() && !only.count(e.id)) continue;
        try {
            std::string detail = e.run();
            std::cout << "criterion " << e.id << " (" << e.name << "): PASS - " << detail << std::endl;
        } catch (const std::exception& ex) {
            std::cout << "criterion " << e.id << " (" << e.name << "): FAIL - " << ex.what() << std::endl;
            ++failures;
        }
    }
    return failures;
}
