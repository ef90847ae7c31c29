#include "helpers.hpp"

#include <random>

using namespace testutil;
using namespace stochinv;

TEST_CASE("drift-walk certificate: accepted at c = 13, rejected at c = 12") {
    Pcfg p = loadPcfg("fig4_collapsed.pcfg");
    Certificate c13 = loadCert("fig4_c13.cert", p);
    CHECK(c13.m0 == -3429);
    CheckResult ok = checkCertificate(p, c13);
    CHECK_MESSAGE(ok.valid, "c=13 certificate must validate");

    Certificate c12 = loadCert("fig4_c12.cert", p);
    CheckResult bad = checkCertificate(p, c12);
    CHECK(!bad.valid);
    REQUIRE(!bad.violations.empty());
    bool named = false;
    for (const auto& v : bad.violations) {
        if (v.obligation.kind != Obligation::Kind::DiffBound) continue;
        if (v.obligation.label.find("l1->l0") != std::string::npos &&
            v.obligation.label.find("x - 2") != std::string::npos)
            named = true;
        // witness difference is 13, one above the claimed bound
        CHECK(v.excess == 1);
    }
    CHECK_MESSAGE(named, "violation must name the l1->l0 (x := x - 2) transition");
}

TEST_CASE("asymmetric-walk ranking certificate: tightened vs verbatim support") {
    Pcfg p = loadPcfg("fig2_collapsed.pcfg");
    Certificate tight = loadCert("fig2_rsm.cert", p);
    CheckResult ok = checkCertificate(p, tight);
    CHECK_MESSAGE(ok.valid, "tightened certificate must validate");

    Certificate verbatim = loadCert("fig2_rsm_paper.cert", p);
    CheckResult bad = checkCertificate(p, verbatim);
    CHECK(!bad.valid);
    REQUIRE(!bad.violations.empty());
    const ObligationViolation* nn = nullptr;
    for (const auto& v : bad.violations)
        if (v.obligation.kind == Obligation::Kind::NonNeg && v.obligation.loc == 1) nn = &v;
    REQUIRE(nn != nullptr);
    // witness in [0, 1/4)
    CHECK(nn->witness[0] >= 0);
    CHECK(nn->witness[0] < Rat(1, 4));

    // the violating region is exactly x in [0, 1/4): its closure extrema are
    // 0 and 1/4
    Assertion region = nn->obligation.premiseAssertion();
    region.push_back(LinearConstraint{-nn->obligation.conclusion.toAffine(), true});
    MaxOutcome hi = maximizeOverClosure(AffineExpr::var(0), closure(region));
    MaxOutcome lo = maximizeOverClosure(-AffineExpr::var(0), closure(region));
    REQUIRE(hi.kind == MaxOutcome::Kind::Optimal);
    REQUIRE(lo.kind == MaxOutcome::Kind::Optimal);
    CHECK(hi.value == Rat(1, 4));
    CHECK(lo.value == 0);
}

TEST_CASE("identically zero map repels from everything") {
    Pcfg p = loadPcfg("fig2_collapsed.pcfg");
    Certificate cert;
    cert.kind = CertKind::RepSm;
    cert.eps = 0;
    cert.c = 0;
    for (int l = 0; l < p.numLocations(); ++l) cert.eta.at[l] = AffineExpr();
    cert.m0 = 0;
    cert.invariant = PredMap::top();
    cert.target = PredMap::top();  // C = everything: only nonnegativity remains
    CheckResult res = checkCertificate(p, cert);
    CHECK(res.valid);
}

TEST_CASE("declared m0 must match eta at the initial configuration") {
    Pcfg p = loadPcfg("fig4_collapsed.pcfg");
    Certificate cert = loadCert("fig4_c13.cert", p);
    cert.m0 = Rat(-1);
    CheckResult res = checkCertificate(p, cert);
    CHECK(!res.valid);
    REQUIRE(!res.notes.empty());
}

TEST_CASE("strictly empty branch premises are vacuous") {
    // The decrease obligation through the x < 0 branch under the x >= 0
    // invariant disjunct has an empty premise as written; its closure
    // contains the boundary point x = 0 where the conclusion fails, but no
    // real configuration takes that branch, so the certificate is valid.
    Pcfg p = loadPcfg("symwalk.pcfg");
    Certificate cert = loadCert("symwalk_repsm.cert", p);
    CheckResult res = checkCertificate(p, cert);
    CHECK(res.valid);
    CHECK(res.violations.empty());
}

TEST_CASE("accepted certificates satisfy expected decrease under the step semantics") {
    // independent of the obligation generator: evaluate the one-step
    // pre-expectation directly from the transition relation at sampled
    // configurations and compare against eta - eps, exactly
    auto probe = [](const Pcfg& p, const Certificate& cert, int lo, int hi, uint64_t seed) {
        std::mt19937_64 rng(seed);
        PredMap notTarget;
        for (int l = 0; l < p.numLocations(); ++l) notTarget.set(l, negatePlp(cert.target(l)));
        int checked = 0;
        for (int it = 0; it < 4000; ++it) {
            int loc = static_cast<int>(rng() % static_cast<uint64_t>(p.numLocations()));
            if (cert.kind == CertKind::RepSm && p.isTerminal(loc)) continue;
            std::vector<Rat> x(static_cast<size_t>(p.vars.size()));
            for (auto& xi : x) xi = Rat(static_cast<int>(rng() % static_cast<uint64_t>(hi - lo + 1)) + lo, 2);
            if (!cert.invariant(loc).holdsAt(x)) continue;
            if (!notTarget(loc).holdsAt(x)) continue;
            PreexpValue pv = preexpValue(p, cert.eta, loc, x);
            REQUIRE(pv.defined);
            CHECK(pv.value <= cert.eta.value(loc, x) - cert.eps);
            ++checked;
        }
        CHECK(checked > 100);
    };
    Pcfg fig4 = loadPcfg("fig4_collapsed.pcfg");
    probe(fig4, loadCert("fig4_c13.cert", fig4), -100, 1200, 9001);
    Pcfg fig2 = loadPcfg("fig2_collapsed.pcfg");
    probe(fig2, loadCert("fig2_rsm.cert", fig2), 0, 200, 9002);
    Pcfg loop = loadPcfg("unifloop.pcfg");
    probe(loop, loadCert("pers_repsm_n5.cert", loop), -4, 0, 9003);
}

TEST_CASE("certificates with disjunctive supports round-trip through print and parse") {
    Pcfg p = loadPcfg("symwalk.pcfg");
    Certificate cert = loadCert("symwalk_repsm.cert", p);
    Certificate again = parseCertificate(printCertificate(cert, p), p);
    CHECK(canonicalPlp(again.invariant(0)) == canonicalPlp(cert.invariant(0)));
    CHECK(again.eps == cert.eps);
    CHECK(again.m0 == cert.m0);
    CHECK(checkCertificate(p, again).valid);
}

TEST_CASE("rescaled certificates stay valid: k*eta with eps and c scaled by k") {
    Pcfg p = loadPcfg("fig4_collapsed.pcfg");
    Certificate base = loadCert("fig4_c13.cert", p);
    for (int k : {2, 10}) {
        Certificate scaled = base;
        scaled.eps = base.eps * k;
        scaled.c = base.c * k;
        scaled.m0 = base.m0 * k;
        for (auto& [l, e] : scaled.eta.at) e *= Rat(k);
        CheckResult res = checkCertificate(p, scaled);
        CHECK_MESSAGE(res.valid, "scaling by ", k, " must preserve validity");
    }
}

TEST_CASE("spot check: no violations for a valid certificate, deterministic reports") {
    Pcfg p = loadPcfg("fig4_collapsed.pcfg");
    Certificate c13 = loadCert("fig4_c13.cert", p);
    SpotCheckReport r1 = spotCheck(p, c13, 2000, 42);
    CHECK(r1.violations == 0);
    CHECK(r1.samplesInPremise > 0);
    SpotCheckReport r2 = spotCheck(p, c13, 2000, 42);
    CHECK(r1.samplesTried == r2.samplesTried);
    CHECK(r1.samplesInPremise == r2.samplesInPremise);
    CHECK(r1.violations == r2.violations);
}

TEST_CASE("spot check finds the c = 12 violation quickly") {
    // the difference-bound violation holds on all of l1, so random samples
    // must hit it
    Pcfg p = loadPcfg("fig4_collapsed.pcfg");
    Certificate c12 = loadCert("fig4_c12.cert", p);
    SpotCheckReport rep = spotCheck(p, c12, 10000, 7);
    CHECK(rep.violations >= 1);
}

TEST_CASE("spot check samples the support of distribution updates") {
    // the sampling-loop certificate has difference obligations quantified
    // over the sampled value; its spot check must stay clean
    Pcfg p = loadPcfg("unifloop.pcfg");
    Certificate cert = loadCert("pers_repsm_n0.cert", p);
    REQUIRE(checkCertificate(p, cert).valid);
    SpotCheckReport rep = spotCheck(p, cert, 4000, 11);
    CHECK(rep.samplesInPremise > 0);
    CHECK(rep.violations == 0);
}
