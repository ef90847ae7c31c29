#pragma once

#include "stochinv/bigfloat.hpp"
#include "stochinv/check.hpp"

#include <iosfwd>
#include <map>
#include <optional>

namespace stochinv {

/// A constraint system over the per-location template coefficients: the
/// Farkas translation of all obligations, assembled as an exact LP. The
/// template of location l is b@l + sum_v a.v@l * x_v; `cSym` is the column of
/// the symbolic difference bound (absent when c was fixed).
struct SynthSystem {
    SymbolTable syms;
    LpBuilder builder;
    SymLin m0Columns;             // eta(init)(x_init) over LP columns
    std::optional<int> cColumn;
    int templateColumns = 0;      // columns 0..templateColumns-1 are template coefficients

    SynthSystem() : builder(syms) {}
    SynthSystem(const SynthSystem&) = delete;

    ExprMap etaFromAssignment(const Pcfg& p, const std::vector<Rat>& assignment) const;
};

/// Builds the LP for an eps-repulsing candidate: nonnegativity on
/// invariant-and-target, decrease on invariant-and-complement at non-terminal
/// locations, two-sided c-difference bounds, all passed through the Farkas
/// translation. `cFixed` substitutes a concrete bound; otherwise c is a
/// column constrained by c >= eps.
std::unique_ptr<SynthSystem> genRepsmSystem(const Pcfg& p, const PredMap& invariant,
                                            const PredMap& target, const Rat& eps,
                                            std::optional<Rat> cFixed);

/// Same with ranking placement: nonnegativity and decrease outside the
/// target, no terminal exemption.
std::unique_ptr<SynthSystem> genRsmSystem(const Pcfg& p, const PredMap& invariant,
                                          const PredMap& target, const Rat& eps,
                                          std::optional<Rat> cFixed);

enum class SynthStatus { Ok, NoCertificate, TrivialZero, TrivialOne };

struct RepsmSynthResult {
    SynthStatus status = SynthStatus::NoCertificate;
    Certificate cert;          // when Ok
    Rat p{1};                  // certified bound on reaching the violation set (exact upper bound)
    Rat cMin{0};
    int bestOffset = -1;       // j of the winning sweep iteration
    Rat m0{0};
    int sweepEvaluated = 0;
    std::vector<std::string> notes;
};

/// The complete synthesis pipeline for a stochastic invariant: fixes eps = 1,
/// minimizes the difference bound c, then for each offset j = 0..sweepN fixes
/// c = cmin + j, minimizes the initial value m0 and evaluates the tail bound;
/// the smallest bound wins (ties to the smallest j). Degenerate cases:
/// TrivialZero when the violation set is empty, TrivialOne when the initial
/// configuration already violates.
RepsmSynthResult synthesizeRepsm(const Pcfg& p, const PredMap& invariant, const PredMap& pi,
                                 int sweepN = 1000, int jobs = 1);

struct RsmSynthResult {
    SynthStatus status = SynthStatus::NoCertificate;
    Certificate cert;
    Rat expectedTimeBound{0};  // m0 / eps
    std::vector<std::string> notes;
};

/// Ranking-certificate synthesis at eps = 1, minimizing the initial value;
/// reports m0/eps as the expected-reachability-time bound.
RsmSynthResult synthesizeRsm(const Pcfg& p, const PredMap& invariant, const PredMap& target);

/// Template shape of a symbolic predicate map: location -> sizes of the
/// conjunctions, one entry per disjunct. Unlisted locations are `true`.
using TemplateShape = std::map<int, std::vector<int>>;

TemplateShape parseTemplateShape(const std::string& text, const Pcfg& p);

struct QuadraticExportStats {
    int symbols = 0;
    int siCoefficients = 0;
    int multipliers = 0;
    int asserts = 0;
    long long quadraticMonomials = 0;
    bool allQuadraticAreMultiplierTimesSi = true;
};

/// Emits the joint synthesis system for a stochastic invariant template: the
/// ranking system for `target` supported by the symbolic map plus the
/// repulsing system for its complement supported by the given concrete map,
/// with shared template symbols identified. Products multiplier-times-
/// template-coefficient are the only quadratic terms. Output is an
/// S-expression constraint file; solving it is out of scope here.
QuadraticExportStats exportQuadraticSystem(const Pcfg& p, const PredMap& target,
                                           const TemplateShape& shape, const PredMap& pureInvariant,
                                           std::ostream& out);

} // namespace stochinv
