#pragma once

#include "stochinv/pcfg.hpp"

#include <map>
#include <string>

namespace stochinv {

/// Per-location affine expression map (a supermartingale candidate).
struct ExprMap {
    std::map<int, AffineExpr> at;

    const AffineExpr& operator()(int loc) const {
        static const AffineExpr zero{};
        auto it = at.find(loc);
        return it == at.end() ? zero : it->second;
    }
    bool total(const Pcfg& p) const {
        for (int l = 0; l < p.numLocations(); ++l)
            if (!at.count(l)) return false;
        return true;
    }
    Rat value(int loc, const std::vector<Rat>& x) const { return (*this)(loc).eval(x); }
};

/// Per-location predicate map with a default for unlisted locations.
struct PredMap {
    std::map<int, Plp> at;
    Plp dflt = Plp::top();

    const Plp& operator()(int loc) const {
        auto it = at.find(loc);
        return it == at.end() ? dflt : it->second;
    }
    void set(int loc, Plp p) { at[loc] = std::move(p); }

    static PredMap top() { return PredMap{}; }
    static PredMap bottom() {
        PredMap m;
        m.dflt = Plp::bottom();
        return m;
    }
    /// The set of configurations at terminal locations.
    static PredMap terminalSet(const Pcfg& p) {
        PredMap m = bottom();
        for (int l = 0; l < p.numLocations(); ++l)
            if (p.isTerminal(l)) m.set(l, Plp::top());
        return m;
    }

    bool isPolyhedral(const Pcfg& p) const {
        for (int l = 0; l < p.numLocations(); ++l)
            if (!(*this)(l).isPolyhedral()) return false;
        return true;
    }
};

/// Locationwise complement; requires each entry polyhedral (at most one
/// disjunct). Throws NotPolyhedralError.
PredMap negatePredMap(const PredMap& m, const Pcfg& p);

/// Locationwise conjunction.
PredMap andPredMap(const PredMap& a, const PredMap& b, const Pcfg& p);

enum class CertKind { Rsm, RepSm };

/// A synthesized or hand-written supermartingale certificate.
struct Certificate {
    CertKind kind = CertKind::RepSm;
    Rat eps{1};
    Rat c{1};
    Rat m0{0};          // eta(initial location, initial valuation)
    ExprMap eta;
    PredMap invariant;  // supporting predicate map (default true)
    PredMap target;     // the set the certificate ranks toward / repels from (default false)
};

/// Certificate file io (format documented in the README). Throws FormatError.
Certificate parseCertificate(const std::string& text, const Pcfg& p);
std::string printCertificate(const Certificate& cert, const Pcfg& p);

/// Predicate-map file: lines `<loc> : <plp>`; unlisted locations take the
/// default. The single keyword line `terminal` denotes the terminal set.
PredMap parsePredMapFile(const std::string& text, const Pcfg& p, bool defaultTrue);
std::string printPredMap(const PredMap& m, const Pcfg& p);

/// Stochastic invariant: a predicate map plus an upper bound on the
/// probability that a run ever leaves it.
struct StochasticInvariant {
    PredMap pi;
    Rat p{0};
};

StochasticInvariant parseStochInvFile(const std::string& text, const Pcfg& p);
std::string printStochInv(const StochasticInvariant& si, const Pcfg& p);

} // namespace stochinv
