#pragma once

#include "stochinv/certificates.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace stochinv {

/// Resolution of nondeterminism during simulation. Estimates under any fixed
/// policy are lower bounds on the supremum over schedulers.
struct SchedulerPolicy {
    enum class NdetRule { UniformRandom, FirstListed, Scripted };
    NdetRule ndet = NdetRule::UniformRandom;
    std::vector<int> script;  // consumed cyclically by Scripted

    enum class ChooseRule { UniformSet, FixedEndpoint };
    ChooseRule choose = ChooseRule::UniformSet;
};

struct RunOutcome {
    enum class Kind { Terminated, EventHit, Censored };
    Kind kind = Kind::Censored;
    long long steps = 0;
};

/// One seeded run of the step semantics: deterministic locations follow the
/// unique enabled guard, probabilistic locations sample the transition
/// distribution, nondeterministic ones ask the policy; sampled updates draw
/// from the distribution, choose updates follow the policy. EventHit fires as
/// soon as a visited configuration satisfies the event map. Throws
/// GuardGapError / UnboundedChooseError.
RunOutcome runOne(const Pcfg& p, const SchedulerPolicy& policy, long long maxSteps, uint64_t seed,
                  const PredMap* event);

struct Estimate {
    long long runs = 0;
    long long eventHits = 0;
    long long terminated = 0;
    long long censored = 0;
    double frequency = 0;       // event frequency (hits / runs)
    double ciLow = 0, ciHigh = 1;  // exact binomial (Clopper-Pearson) interval
    double confidence = 0.95;
    double meanTerminatedSteps = 0;
};

/// Independent replicas with per-replica derived seeds; exact binomial
/// confidence interval on the event frequency.
Estimate estimate(const Pcfg& p, const SchedulerPolicy& policy, const PredMap* event, long long runs,
                  long long maxSteps, uint64_t seed, double confidence, int jobs = 1,
                  std::vector<RunOutcome>* outcomes = nullptr);

/// One-sided lower confidence bound on the success probability at the given
/// level (e.g. 0.99), from the exact binomial relation.
double clopperPearsonLower(long long hits, long long runs, double level);
/// Two-sided exact interval endpoints.
std::pair<double, double> clopperPearsonInterval(long long hits, long long runs, double confidence);

std::string outcomeKindName(RunOutcome::Kind k);

} // namespace stochinv
