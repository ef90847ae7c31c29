#pragma once

#include "stochinv/obligations.hpp"

#include <string>
#include <vector>

namespace stochinv {

struct ObligationViolation {
    Obligation obligation;
    std::vector<Rat> witness;       // extended point (program vars + fresh)
    Rat excess{0};                  // conclusion value at the witness (> 0)
    std::string describe(const Pcfg& p) const;
};

struct CheckResult {
    bool valid = false;
    std::vector<ObligationViolation> violations;
    std::vector<std::string> notes;  // e.g. boundary-relaxed acceptances
    int obligationsChecked = 0;
    // per-obligation report rows: (location, kind, label, status)
    struct Row {
        std::string location, kind, label, status;
    };
    std::vector<Row> table;
};

/// Exact verification of a certificate against its own supporting predicate
/// map: regenerates every obligation with the concrete eta, eps and c
/// substituted and decides each implication by LP over the premise closure.
/// A certificate failing only on the boundary of a strict premise constraint
/// is reported valid with a note (the same closure relaxation synthesis
/// uses). Dispatches on cert.kind.
CheckResult checkCertificate(const Pcfg& p, const Certificate& cert);

struct SpotCheckReport {
    long long samplesTried = 0;
    long long samplesInPremise = 0;  // obligation evaluations with satisfied premise
    long long violations = 0;
    std::vector<std::string> firstViolations;  // up to a few descriptions
};

/// Randomized numeric cross-validation: samples configurations inside the
/// supporting predicate map (restricted to a bounded box) and evaluates every
/// obligation with exact rationals. Deterministic for a fixed seed.
SpotCheckReport spotCheck(const Pcfg& p, const Certificate& cert, long long samples, uint64_t seed,
                          const Rat& box = Rat(1000));

/// The obligation set a certificate is checked against.
std::vector<Obligation> certificateObligations(const Pcfg& p, const Certificate& cert);

} // namespace stochinv
