#include "stochinv/bounds.hpp"

#include "stochinv/check.hpp"

#include <sstream>

namespace stochinv {

namespace {

const BigFloat& upMargin() {
    static const BigFloat m = BigFloat(1) + BigFloat("1e-9");
    return m;
}

void requirePositive(const Rat& eps, const Rat& c, const Rat& m0) {
    if (!(eps > 0)) throw PreconditionError("tail bound requires eps > 0");
    if (!(c > 0)) throw PreconditionError("tail bound requires c > 0");
    if (!(m0 < 0)) throw PreconditionError("tail bound requires m0 < 0");
}

Rat logGamma(const Rat& eps, const Rat& c) {
    Rat d = c + eps;
    return -(eps * eps) / (2 * d * d);
}
Rat logAlpha(const Rat& eps, const Rat& c, const Rat& m0) {
    Rat d = c + eps;
    return eps * m0 / (d * d);
}

} // namespace

Rat ratFromBigFloat(const BigFloat& f) {
    if (f == 0) return Rat(0);
    mpz_t z;
    mpz_init(z);
    mpfr_exp_t e = mpfr_get_z_2exp(z, f.backend().data());
    Int mant(z);
    mpz_clear(z);
    Rat r(mant);
    if (e > 0) {
        for (mpfr_exp_t i = 0; i < e; ++i) r *= 2;
    } else {
        for (mpfr_exp_t i = 0; i < -e; ++i) r /= 2;
    }
    return r;
}

std::string sci(const BigFloat& f, int digits) {
    std::ostringstream os;
    os.precision(digits);
    os << std::scientific << f;
    return os.str();
}

TailBound azumaTail(const Rat& eps, const Rat& c, const Rat& m0, long long n) {
    requirePositive(eps, c, m0);
    if (n < 0) throw PreconditionError("tail bound requires n >= 0");
    TailBound tb;
    tb.logValue = logAlpha(eps, c, m0) + Rat(n) * logGamma(eps, c);
    tb.raw = exp(toBigFloat(tb.logValue)) * upMargin();
    tb.value = tb.raw > 1 ? BigFloat(1) : tb.raw;
    std::ostringstream os;
    os << "exp(" << ratStr(logAlpha(eps, c, m0)) << " + " << n << "*" << ratStr(logGamma(eps, c)) << ")";
    tb.expr = os.str();
    return tb;
}

ReachBound reachBound(const Rat& eps, const Rat& c, const Rat& m0) {
    requirePositive(eps, c, m0);
    ReachBound rb;
    rb.A = ratCeil(ratAbs(m0) / c);
    Rat lg = logGamma(eps, c);
    Rat la = logAlpha(eps, c, m0);
    BigFloat gamma = exp(toBigFloat(lg));
    BigFloat denom = 1 - gamma;
    BigFloat lnp = toBigFloat(la + Rat(rb.A) * lg) - log(denom);
    rb.raw = exp(lnp) * upMargin();
    rb.value = rb.raw > 1 ? BigFloat(1) : rb.raw;
    rb.exactValue = rb.raw > 1 ? Rat(1) : ratFromBigFloat(rb.value);
    std::ostringstream os;
    os << "min(1, exp(" << ratStr(la) << ") * exp(" << ratStr(lg) << ")^" << rb.A.str()
       << " / (1 - exp(" << ratStr(lg) << ")))";
    rb.expr = os.str();
    return rb;
}

bool complementEmpty(const Pcfg& p, const PredMap& pi) {
    PredMap notPi = negatePredMap(pi, p);
    for (int l = 0; l < p.numLocations(); ++l)
        for (const auto& d : notPi(l).disjuncts)
            if (satisfiableStrict(d).satisfiable) return false;
    return true;
}

StochasticInvariant trivialStochasticInvariant(const Pcfg& p, const PredMap& pi) {
    (void)p;
    StochasticInvariant si;
    si.pi = pi;
    si.p = 0;
    return si;
}

StochasticInvariant makeStochasticInvariant(const Pcfg& p, const Certificate& cert, const PredMap& pi) {
    if (complementEmpty(p, pi)) return trivialStochasticInvariant(p, pi);
    if (cert.kind != CertKind::RepSm)
        throw InvalidCertificateError("a repulsing certificate is required");
    if (!(cert.eps > 0)) throw InvalidCertificateError("stochastic invariants need eps > 0");
    if (!(cert.m0 < 0)) throw InvalidCertificateError("stochastic invariants need a negative initial value");
    PredMap notPi = negatePredMap(pi, p);
    for (int l = 0; l < p.numLocations(); ++l)
        if (!(canonicalPlp(cert.target(l)) == canonicalPlp(notPi(l))))
            throw InvalidCertificateError("certificate target is not the complement of the predicate map at '" +
                                          p.locations[static_cast<size_t>(l)].name + "'");
    CheckResult cr = checkCertificate(p, cert);
    if (!cr.valid) throw InvalidCertificateError("certificate fails verification");
    StochasticInvariant si;
    si.pi = pi;
    si.p = reachBound(cert.eps, cert.c, cert.m0).exactValue;
    return si;
}

Rat terminationLowerBound(const Pcfg& p, const std::vector<StochasticInvariant>& invariants,
                          const Certificate& rsm) {
    if (rsm.kind != CertKind::Rsm) throw InvalidCertificateError("a ranking certificate is required");
    if (!(rsm.eps > 0)) throw InvalidCertificateError("the ranking certificate needs eps > 0");
    for (int l = 0; l < p.numLocations(); ++l) {
        Plp conj = Plp::top();
        for (const auto& si : invariants) conj = andPlp(conj, si.pi(l));
        for (const auto& d : conj.disjuncts)
            if (!entailsPlp(d, rsm.invariant(l)))
                throw EntailmentError(
                    "the conjunction of the stochastic invariants does not entail the certificate's "
                    "supporting map at '" +
                    p.locations[static_cast<size_t>(l)].name + "'");
    }
    Rat sum(0);
    for (const auto& si : invariants) sum += si.p;
    Rat bound = 1 - sum;
    return bound < 0 ? Rat(0) : bound;
}

const char* verdictKindName(Verdict::Kind k) {
    switch (k) {
        case Verdict::Kind::NotAsTerminating: return "NotAsTerminating";
        case Verdict::Kind::InfiniteExpectedTime: return "InfiniteExpectedTime";
        case Verdict::Kind::Persistent: return "Persistent";
        case Verdict::Kind::TerminationLowerBound: return "TerminationLowerBound";
        case Verdict::Kind::Unknown: return "Unknown";
    }
    return "?";
}

namespace {

// The refutation verdicts speak about termination, so the certificate's
// target must cover every invariant-consistent configuration at terminal
// locations.
bool targetCoversTerminals(const Pcfg& p, const Certificate& cert, std::string* why) {
    for (int l = 0; l < p.numLocations(); ++l) {
        if (!p.isTerminal(l)) continue;
        for (const auto& d : cert.invariant(l).disjuncts) {
            if (!entailsPlp(d, cert.target(l))) {
                if (why)
                    *why = "certificate target does not cover the terminal location '" +
                           p.locations[static_cast<size_t>(l)].name + "'";
                return false;
            }
        }
    }
    return true;
}

Verdict unknown(const std::string& theorem, const std::string& why) {
    Verdict v;
    v.kind = Verdict::Kind::Unknown;
    v.theorem = theorem;
    v.justification = why;
    return v;
}

} // namespace

Verdict refuteAsTermination(const Pcfg& p, const Certificate& cert) {
    const char* tag = "repulsing-refutation (optional stopping)";
    if (cert.kind != CertKind::RepSm) return unknown(tag, "a repulsing certificate is required");
    CheckResult cr = checkCertificate(p, cert);
    if (!cr.valid) return unknown(tag, "certificate fails verification");
    std::string why;
    if (!targetCoversTerminals(p, cert, &why)) return unknown(tag, why);
    if (!(cert.eps > 0)) return unknown(tag, "eps must be positive");
    if (!(cert.c > 0)) return unknown(tag, "the difference bound must be positive");
    if (!(cert.m0 < 0)) return unknown(tag, "the initial value must be negative");
    Verdict v;
    v.kind = Verdict::Kind::NotAsTerminating;
    v.theorem = tag;
    v.justification = "validated repulsing certificate with eps = " + ratDecimalStr(cert.eps) +
                      ", c = " + ratDecimalStr(cert.c) + ", m0 = " + ratDecimalStr(cert.m0) +
                      " < 0: the target is reached with probability < 1 under every scheduler";
    return v;
}

Verdict refuteFiniteTermination(const Pcfg& p, const Certificate& cert) {
    const char* tag = "zero-eps-repulsing refutation (optional stopping)";
    if (cert.kind != CertKind::RepSm) return unknown(tag, "a repulsing certificate is required");
    CheckResult cr = checkCertificate(p, cert);
    if (!cr.valid) return unknown(tag, "certificate fails verification");
    std::string why;
    if (!targetCoversTerminals(p, cert, &why)) return unknown(tag, why);
    if (!(cert.eps >= 0)) return unknown(tag, "eps must be nonnegative");
    if (!(cert.c > 0)) return unknown(tag, "the difference bound must be positive");
    if (!(cert.m0 < 0)) return unknown(tag, "the initial value must be negative");
    Verdict v;
    v.kind = Verdict::Kind::InfiniteExpectedTime;
    v.theorem = tag;
    v.justification = "validated repulsing certificate with eps >= 0, c > 0 and m0 = " +
                      ratDecimalStr(cert.m0) + " < 0: the expected reachability time is infinite";
    return v;
}

Verdict checkPersistence(const Pcfg& p, const Certificate& repsm, const Certificate& rsm, const Rat& K) {
    const char* tag = "ranking-into-repelled-sublevel persistence";
    if (repsm.kind != CertKind::RepSm || rsm.kind != CertKind::Rsm)
        return unknown(tag, "needs a repulsing and a ranking certificate");

    // The ranking certificate must target {eta_rep <= K} within the repulsing
    // certificate's supporting map.
    for (int l = 0; l < p.numLocations(); ++l) {
        AffineExpr level = repsm.eta(l);
        level.constant -= K;
        Plp expected = andPlp(Plp::single({LinearConstraint{level, false}}), repsm.invariant(l));
        if (!(canonicalPlp(rsm.target(l)) == canonicalPlp(expected)))
            throw DMismatchError("ranking certificate target at '" + p.locations[static_cast<size_t>(l)].name +
                                 "' is not the sublevel set {eta <= " + ratDecimalStr(K) +
                                 "} within the supporting map");
    }
    if (!(K < 0)) return unknown(tag, "the sublevel threshold K must be negative");
    if (!(repsm.eps > 0) || !(repsm.c > 0)) return unknown(tag, "repulsing certificate needs eps > 0 and c > 0");
    if (!(rsm.eps > 0)) return unknown(tag, "ranking certificate needs eps > 0");
    CheckResult r1 = checkCertificate(p, repsm);
    if (!r1.valid) return unknown(tag, "repulsing certificate fails verification");
    CheckResult r2 = checkCertificate(p, rsm);
    if (!r2.valid) return unknown(tag, "ranking certificate fails verification");
    Verdict v;
    v.kind = Verdict::Kind::Persistent;
    v.theorem = tag;
    v.justification =
        "the sublevel set is reached almost-surely and escapes back past the repelled set with "
        "probability bounded away from 1, so the complement of the repelled set is almost-surely persistent";
    return v;
}

std::string verdictReport(const Verdict& v, const std::string& certPath) {
    std::ostringstream os;
    os << "verdict: " << verdictKindName(v.kind) << "\n";
    os << "theorem: " << v.theorem << "\n";
    if (!certPath.empty()) os << "certificate: " << certPath << "\n";
    if (v.bound) os << "bound: " << ratDecimalStr(*v.bound) << "\n";
    os << "justification: " << v.justification << "\n";
    return os.str();
}

} // namespace stochinv
