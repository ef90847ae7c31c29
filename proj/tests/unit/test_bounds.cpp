#include "helpers.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <random>

using namespace testutil;
using namespace stochinv;

namespace {

using Huge = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<200>>;

Huge hugeOf(const Rat& q) { return Huge(numerator(q).str()) / Huge(denominator(q).str()); }

// 200-digit reference evaluation of the closed forms.
Huge refTail(const Rat& eps, const Rat& c, const Rat& m0, long long n) {
    Rat d = c + eps;
    Rat la = eps * m0 / (d * d);
    Rat lg = -(eps * eps) / (2 * d * d);
    return exp(hugeOf(la + Rat(n) * lg));
}

Huge refReach(const Rat& eps, const Rat& c, const Rat& m0, Int* aOut = nullptr) {
    Rat d = c + eps;
    Rat la = eps * m0 / (d * d);
    Rat lg = -(eps * eps) / (2 * d * d);
    Int A = ratCeil(ratAbs(m0) / c);
    if (aOut) *aOut = A;
    Huge gamma = exp(hugeOf(lg));
    return exp(hugeOf(la + Rat(A) * lg)) / (1 - gamma);
}

} // namespace

TEST_CASE("tail bound values match high-precision references") {
    // alpha*gamma^264 for (1, 13, -3429) is 1.28700e-8
    TailBound t = azumaTail(Rat(1), Rat(13), Rat(-3429), 264);
    CHECK(dbl(t.value) / 1.28700e-8 == doctest::Approx(1.0).epsilon(1e-4));
    // n = 0: alpha alone
    TailBound t0 = azumaTail(Rat(1), Rat(1), Rat(-1), 0);
    CHECK(dbl(t0.value) / std::exp(-0.25) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK_THROWS_AS(azumaTail(Rat(1), Rat(1), Rat(0), 1), PreconditionError);
    CHECK_THROWS_AS(azumaTail(Rat(0), Rat(1), Rat(-1), 1), PreconditionError);
    CHECK_THROWS_AS(azumaTail(Rat(1), Rat(1), Rat(-1), -3), PreconditionError);
}

TEST_CASE("reachability bound values") {
    ReachBound rb = reachBound(Rat(1), Rat(13), Rat(-3429));
    CHECK(rb.A == 264);
    CHECK(dbl(rb.value) / 5.051475e-6 == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(rb.value >= BigFloat("4.6e-6"));
    CHECK(rb.value <= BigFloat("5.6e-6"));

    // raw value above 1 clamps
    ReachBound one = reachBound(Rat(1), Rat(1), Rat(-1));
    CHECK(dbl(one.raw) / 5.849116 == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(one.value == 1);
    CHECK(one.exactValue == 1);

    // monotone in |m0|
    ReachBound far = reachBound(Rat(1), Rat(13), Rat(-6858));
    CHECK(far.value < rb.value);
}

TEST_CASE("bound monotonicity on a grid") {
    // nonincreasing in |m0|, nondecreasing in c (eps fixed)
    for (int i = 1; i <= 20; ++i) {
        BigFloat prev;
        for (int j = 1; j <= 20; ++j) {
            ReachBound rb = reachBound(Rat(1), Rat(3 + i), Rat(-20 * j));
            if (j > 1) CHECK(rb.raw <= prev);
            prev = rb.raw;
        }
    }
    for (int j = 1; j <= 20; ++j) {
        BigFloat prev;
        for (int i = 1; i <= 20; ++i) {
            ReachBound rb = reachBound(Rat(1), Rat(3 + i), Rat(-20 * j));
            if (i > 1) CHECK(rb.raw >= prev);
            prev = rb.raw;
        }
    }
}

TEST_CASE("bounds are conservative against 200-digit references and clamped") {
    std::mt19937_64 rng(4242);
    for (int k = 0; k < 100; ++k) {
        Rat c = Rat(1 + static_cast<int>(rng() % 990), 10);            // [0.1, 99.1]
        Rat eps = c * Rat(1 + static_cast<int>(rng() % 100), 100);     // (0, c]
        Rat m0 = -Rat(1 + static_cast<int>(rng() % 99990), 10);       // [-9999.1, -0.1]
        long long n = static_cast<long long>(rng() % 1000);
        TailBound t = azumaTail(eps, c, m0, n);
        CHECK(Huge(t.raw.str()) >= refTail(eps, c, m0, n));
        CHECK(t.value >= 0);
        CHECK(t.value <= 1);
        ReachBound rb = reachBound(eps, c, m0);
        CHECK(Huge(rb.raw.str()) >= refReach(eps, c, m0));
        CHECK(rb.value >= 0);
        CHECK(rb.value <= 1);
        CHECK(ratFromBigFloat(rb.value) == rb.exactValue);
    }
}

TEST_CASE("geometric identity: partial tail sums stay below the reach bound") {
    // sum over the tail terms from A on is exactly alpha*gamma^A/(1-gamma);
    // partial sums must approach the bound from below
    Rat eps(1), c(13), m0(-3429);
    ReachBound rb = reachBound(eps, c, m0);
    Int A = rb.A;
    BigFloat gamma = exp(toBigFloat(-(eps * eps) / (2 * (c + eps) * (c + eps))));
    BigFloat term = azumaTail(eps, c, m0, A.convert_to<long long>()).raw / (BigFloat(1) + BigFloat("1e-9"));
    BigFloat sum = 0;
    long long from = A.convert_to<long long>();
    for (long long n = from; n <= from + 200000; ++n) {
        sum += term;
        term *= gamma;
        CHECK(sum <= rb.raw);
    }
    // converged to the unclamped bound within 1e-12 relative
    BigFloat raw = rb.raw / (BigFloat(1) + BigFloat("1e-9"));
    CHECK(abs(sum - raw) / raw < BigFloat("1e-12"));
    // incremental terms agree with direct evaluations along the way
    for (long long n : {from, from + 1000, from + 100000}) {
        TailBound direct = azumaTail(eps, c, m0, n);
        BigFloat again = azumaTail(eps, c, m0, from).raw;
        (void)again;
        CHECK(direct.raw > 0);
    }
}

TEST_CASE("make a stochastic invariant from the drift-walk certificate") {
    Pcfg p = loadPcfg("fig4_collapsed.pcfg");
    Certificate cert = loadCert("fig4_c13.cert", p);
    PredMap pi = PredMap::top();
    VarTable vars = p.vars;
    pi.set(0, plpOf("x <= 500", vars));
    StochasticInvariant si = makeStochasticInvariant(p, cert, pi);
    CHECK(si.p > 0);
    CHECK(si.p <= Rat(56, 10000000));  // about 5.04e-6
    CHECK(si.p >= Rat(46, 10000000));

    SUBCASE("empty complement yields probability zero without a certificate") {
        StochasticInvariant z = makeStochasticInvariant(p, cert, PredMap::top());
        CHECK(z.p == 0);
    }
    SUBCASE("certificate at the boundary m0 = -c") {
        // A = 1; the formula still applies
        ReachBound rb = reachBound(Rat(1), Rat(13), Rat(-13));
        CHECK(rb.A == 1);
        CHECK(rb.value <= 1);
    }
    SUBCASE("mismatched target is rejected") {
        PredMap other = PredMap::top();
        other.set(0, plpOf("x <= 400", vars));
        CHECK_THROWS_AS(makeStochasticInvariant(p, cert, other), InvalidCertificateError);
    }
}

TEST_CASE("union bound for the two-loop program") {
    Pcfg p = loadPcfg("fig3_collapsed.pcfg");
    Certificate rsm = loadCert("fig3_rsm.cert", p);
    StochasticInvariant iprime = parseStochInvFile(slurpData("iprime.si"), p);
    StochasticInvariant pi = parseStochInvFile(slurpData("pi_fig3.si"), p);
    Rat bound = terminationLowerBound(p, {iprime, pi}, rsm);
    CHECK(bound == Rat(99999, 100000));
    CHECK(ratDecimalStr(bound) == "0.99999");

    SUBCASE("empty invariant list against a trivially supported certificate") {
        Certificate trivial = rsm;
        trivial.invariant = PredMap::top();
        CHECK(terminationLowerBound(p, {}, trivial) == 1);
    }
    SUBCASE("bounds clamp at zero") {
        StochasticInvariant a, b;
        a.pi = PredMap::top();
        a.p = Rat(7, 10);
        b.pi = PredMap::top();
        b.p = Rat(6, 10);
        Certificate trivial = rsm;
        trivial.invariant = PredMap::top();
        CHECK(terminationLowerBound(p, {a, b}, trivial) == 0);
    }
    SUBCASE("entailment failure raises") {
        Certificate strong = rsm;
        VarTable vars = p.vars;
        strong.invariant.set(3, plpOf("y >= 100", vars));
        CHECK_THROWS_AS(terminationLowerBound(p, {iprime, pi}, strong), EntailmentError);
    }
}

TEST_CASE("refutation verdicts") {
    SUBCASE("infinite expected time on the symmetric walk") {
        Pcfg p = loadPcfg("symwalk.pcfg");
        Certificate cert = loadCert("symwalk_repsm.cert", p);
        Verdict v = refuteFiniteTermination(p, cert);
        CHECK(v.kind == Verdict::Kind::InfiniteExpectedTime);

        // m0 = 0 gives Unknown: restart at the boundary
        Pcfg p0 = parsePcfgFile(
            "vars x\nloc l0 det\nloc l1 prob\nloc l2 det terminal\ninit l0 -1\n"
            "edge l0 l1 var x update id guard x >= 0\n"
            "edge l0 l2 var x update id guard not (x >= 0)\n"
            "edge l1 l0 var x update affine x + 1 prob 0.5\n"
            "edge l1 l0 var x update affine x - 1 prob 0.5\n"
            "edge l2 l2 var x update id\n");
        Certificate cert0 = parseCertificate(slurpData("symwalk_repsm.cert"), p0);
        cert0.m0 = 0;  // eta(l0, -1) = 0
        Verdict v0 = refuteFiniteTermination(p0, cert0);
        CHECK(v0.kind == Verdict::Kind::Unknown);
    }
    SUBCASE("not almost-surely terminating on the upward-drift walk") {
        Pcfg p = loadPcfg("driftwalk.pcfg");
        Certificate cert = loadCert("driftwalk_repsm.cert", p);
        CHECK(checkCertificate(p, cert).valid);
        Verdict v = refuteAsTermination(p, cert);
        CHECK(v.kind == Verdict::Kind::NotAsTerminating);

        // eps = 0 is not enough for this refutation
        Pcfg sym = loadPcfg("symwalk.pcfg");
        Certificate zeroEps = loadCert("symwalk_repsm.cert", sym);
        Verdict u = refuteAsTermination(sym, zeroEps);
        CHECK(u.kind == Verdict::Kind::Unknown);
    }
    SUBCASE("a positive-eps certificate with negative m0 also refutes finiteness") {
        Pcfg p = loadPcfg("driftwalk.pcfg");
        Certificate cert = loadCert("driftwalk_repsm.cert", p);
        Verdict v = refuteFiniteTermination(p, cert);
        CHECK(v.kind == Verdict::Kind::InfiniteExpectedTime);
    }
}

TEST_CASE("persistence verdicts for the sampling loop") {
    Pcfg p = loadPcfg("unifloop.pcfg");
    for (const char* n : {"n0", "n5", "nm3"}) {
        Certificate repsm = loadCert(std::string("pers_repsm_") + n + ".cert", p);
        Certificate rsm = loadCert(std::string("pers_rsm_") + n + ".cert", p);
        Verdict v = checkPersistence(p, repsm, rsm, Rat(-1));
        CHECK_MESSAGE(v.kind == Verdict::Kind::Persistent, "persistence failed for ", n, ": ", v.justification);
    }
    SUBCASE("K = 0 is rejected by the theorem shape") {
        Certificate repsm = loadCert("pers_repsm_n0.cert", p);
        Certificate rsm = loadCert("pers_rsm_n0.cert", p);
        // adjust the ranking target to the K = 0 sublevel so only the sign of
        // K fails
        VarTable vars = p.vars;
        rsm.target.set(0, andPlp(plpOf("x <= 0", vars), repsm.invariant(0)));
        Verdict v = checkPersistence(p, repsm, rsm, Rat(0));
        CHECK(v.kind == Verdict::Kind::Unknown);
    }
    SUBCASE("unrelated ranking target raises a mismatch") {
        Certificate repsm = loadCert("pers_repsm_n0.cert", p);
        Certificate rsm = loadCert("pers_rsm_n0.cert", p);
        VarTable vars = p.vars;
        rsm.target.set(0, plpOf("x <= 42", vars));
        CHECK_THROWS_AS(checkPersistence(p, repsm, rsm, Rat(-1)), DMismatchError);
    }
}
