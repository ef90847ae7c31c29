#pragma once

#include "stochinv/bigfloat.hpp"
#include "stochinv/certificates.hpp"

#include <optional>
#include <string>
#include <vector>

namespace stochinv {

/// alpha * gamma^n with gamma = exp(-eps^2 / (2(c+eps)^2)) and
/// alpha = exp(eps * m0 / (c+eps)^2): the probability that the target set is
/// reached in exactly n steps. Evaluated in the log domain at high precision
/// with a conservative upward relative margin of 1e-9 and clamped to [0,1].
struct TailBound {
    BigFloat value{0};   // margined, clamped to [0,1]
    BigFloat raw{0};     // margined, unclamped
    Rat logValue{0};     // exact: ln(alpha) + n * ln(gamma), both rational
    std::string expr;
};
TailBound azumaTail(const Rat& eps, const Rat& c, const Rat& m0, long long n);

/// min(1, alpha * gamma^A / (1 - gamma)) with A = ceil(|m0| / c): the
/// certified upper bound on ever reaching the target set. Conservative
/// upward rounding; `exactValue` is an exact rational upper bound.
struct ReachBound {
    BigFloat value{0};   // margined, clamped to [0,1]
    BigFloat raw{0};     // margined, unclamped
    Rat exactValue{1};   // exact rational equal to the clamped value
    Int A{0};
    std::string expr;
};
ReachBound reachBound(const Rat& eps, const Rat& c, const Rat& m0);

/// Wraps a checker-validated repulsing certificate for the complement of
/// `pi` into a stochastic invariant (pi, reachBound(eps, c, m0)). Validates
/// the certificate internally. When the complement of pi is empty the result
/// is (pi, 0) without needing a certificate.
StochasticInvariant makeStochasticInvariant(const Pcfg& p, const Certificate& cert, const PredMap& pi);
StochasticInvariant trivialStochasticInvariant(const Pcfg& p, const PredMap& pi);
bool complementEmpty(const Pcfg& p, const PredMap& pi);

/// max(0, 1 - sum p_j): a lower bound on the probability of reaching the
/// ranking certificate's target, valid when the certificate's supporting map
/// is entailed locationwise by the conjunction of the stochastic invariants.
/// Throws EntailmentError when the entailment check fails. The certificate is
/// assumed validated.
Rat terminationLowerBound(const Pcfg& p, const std::vector<StochasticInvariant>& invariants,
                          const Certificate& rsm);

struct Verdict {
    enum class Kind { NotAsTerminating, InfiniteExpectedTime, Persistent, TerminationLowerBound, Unknown };
    Kind kind = Kind::Unknown;
    std::string theorem;        // which soundness argument backs the verdict
    std::string justification;
    std::optional<Rat> bound;
};

const char* verdictKindName(Verdict::Kind k);

/// Refutes almost-sure reachability of the certificate's target (and hence
/// almost-sure termination when the target covers the terminal
/// configurations): NotAsTerminating iff the certificate validates with
/// eps > 0, c > 0 and negative initial value.
Verdict refuteAsTermination(const Pcfg& p, const Certificate& cert);

/// Refutes finite expected reachability time: InfiniteExpectedTime iff the
/// certificate validates with eps >= 0, c > 0 and negative initial value.
Verdict refuteFiniteTermination(const Pcfg& p, const Certificate& cert);

/// Persistence of the complement of the repulsing certificate's target:
/// requires a validated repulsing certificate (eps > 0) for the set to avoid
/// and a validated ranking certificate (eps > 0) for the sublevel set
/// {eta <= K} within the supporting map, with K < 0. Throws DMismatchError
/// when the ranking certificate's target is not of that shape.
Verdict checkPersistence(const Pcfg& p, const Certificate& repsm, const Certificate& rsm, const Rat& K);

/// Plain-text verdict report block.
std::string verdictReport(const Verdict& v, const std::string& certPath);

} // namespace stochinv
