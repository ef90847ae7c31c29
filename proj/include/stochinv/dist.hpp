#pragma once

#include "stochinv/assertion.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace stochinv {

/// A distribution as the analysis sees it: id, exact expected value, and a
/// single-variable predicate covering its support (over variable index 0).
struct DistributionSpec {
    std::string id;
    Rat mean{0};
    Plp support = Plp::top();

    /// [min, max] of the support (unbounded sides empty), from per-disjunct
    /// interval bounds.
    std::optional<Rat> supportMin() const;
    std::optional<Rat> supportMax() const;

    /// The expected value must lie in the closed convex hull of the support.
    bool meanInsideHull() const;
};

/// uniform(a,b), bernoulli(p), dirac(v). Throws UnknownDistributionError /
/// InvalidParametersError.
DistributionSpec builtinDistribution(const std::string& name, const std::vector<Rat>& params);

/// Parses builtin syntax "uniform(-2,1)" etc.; nullopt when `text` is not of
/// that shape.
std::optional<DistributionSpec> parseBuiltinDistribution(const std::string& text);

class DistRegistry {
public:
    const DistributionSpec& resolve(const std::string& id);  // builtin syntax or registered id
    void add(DistributionSpec d);
    bool has(const std::string& id) const { return dists_.count(id) > 0; }
    const std::map<std::string, DistributionSpec>& all() const { return dists_; }

private:
    std::map<std::string, DistributionSpec> dists_;
};

} // namespace stochinv
