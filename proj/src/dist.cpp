#include "stochinv/dist.hpp"

#include "stochinv/polyhedra.hpp"

#include <sstream>

namespace stochinv {

namespace {

// Interval hull of one support disjunct via LP on variable 0.
std::pair<std::optional<Rat>, std::optional<Rat>> disjunctBounds(const Assertion& a) {
    AffineExpr x = AffineExpr::var(0);
    MaxOutcome hi = maximizeOverClosure(x, a);
    MaxOutcome lo = maximizeOverClosure(-x, a);
    std::optional<Rat> mn, mx;
    if (hi.kind == MaxOutcome::Kind::Optimal) mx = hi.value;
    if (lo.kind == MaxOutcome::Kind::Optimal) mn = -lo.value;
    return {mn, mx};
}

LinearConstraint le(AffineExpr e) { return LinearConstraint{std::move(e), false}; }

} // namespace

std::optional<Rat> DistributionSpec::supportMin() const {
    std::optional<Rat> best;
    for (const auto& d : support.disjuncts) {
        if (!satisfiableClosure(closure(d))) continue;
        auto [mn, mx] = disjunctBounds(d);
        if (!mn) return std::nullopt;  // unbounded below
        if (!best || *mn < *best) best = mn;
    }
    return best;
}

std::optional<Rat> DistributionSpec::supportMax() const {
    std::optional<Rat> best;
    for (const auto& d : support.disjuncts) {
        if (!satisfiableClosure(closure(d))) continue;
        auto [mn, mx] = disjunctBounds(d);
        if (!mx) return std::nullopt;
        if (!best || *mx > *best) best = mx;
    }
    return best;
}

bool DistributionSpec::meanInsideHull() const {
    auto mn = supportMin();
    auto mx = supportMax();
    bool anySat = false;
    for (const auto& d : support.disjuncts)
        if (satisfiableClosure(closure(d))) { anySat = true; break; }
    if (!anySat) return false;
    if (mn && mean < *mn) return false;
    if (mx && mean > *mx) return false;
    return true;
}

DistributionSpec builtinDistribution(const std::string& name, const std::vector<Rat>& params) {
    DistributionSpec d;
    AffineExpr x = AffineExpr::var(0);
    if (name == "uniform") {
        if (params.size() != 2) throw InvalidParametersError("uniform expects two parameters");
        const Rat &a = params[0], &b = params[1];
        if (a > b) throw InvalidParametersError("uniform(a,b) requires a <= b");
        d.mean = (a + b) / 2;
        Assertion supp;
        supp.push_back(le(x - AffineExpr(b)));   // x <= b
        supp.push_back(le(AffineExpr(a) - x));   // x >= a
        d.support = Plp::single(supp);
    } else if (name == "bernoulli") {
        if (params.size() != 1) throw InvalidParametersError("bernoulli expects one parameter");
        const Rat& p = params[0];
        if (p < 0 || p > 1) throw InvalidParametersError("bernoulli(p) requires 0 <= p <= 1");
        d.mean = p;
        Plp supp;
        supp.disjuncts.push_back({le(x), le(-x)});                                  // x == 0
        supp.disjuncts.push_back({le(x - AffineExpr(Rat(1))), le(AffineExpr(Rat(1)) - x)});  // x == 1
        d.support = supp;
    } else if (name == "dirac") {
        if (params.size() != 1) throw InvalidParametersError("dirac expects one parameter");
        const Rat& v = params[0];
        d.mean = v;
        d.support = Plp::single({le(x - AffineExpr(v)), le(AffineExpr(v) - x)});
    } else {
        throw UnknownDistributionError("unknown distribution '" + name + "'");
    }
    std::ostringstream id;
    id << name << "(";
    for (size_t i = 0; i < params.size(); ++i) {
        if (i) id << ",";
        id << ratDecimalStr(params[i]);
    }
    id << ")";
    d.id = id.str();
    return d;
}

std::optional<DistributionSpec> parseBuiltinDistribution(const std::string& text) {
    auto open = text.find('(');
    if (open == std::string::npos || text.back() != ')') return std::nullopt;
    std::string name = text.substr(0, open);
    if (name != "uniform" && name != "bernoulli" && name != "dirac") return std::nullopt;
    std::string inner = text.substr(open + 1, text.size() - open - 2);
    std::vector<Rat> params;
    size_t start = 0;
    while (start <= inner.size()) {
        size_t comma = inner.find(',', start);
        std::string tok = inner.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        // trim
        while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.front()))) tok.erase(tok.begin());
        while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.back()))) tok.pop_back();
        if (!tok.empty()) {
            auto r = parseRat(tok);
            if (!r) return std::nullopt;
            params.push_back(*r);
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return builtinDistribution(name, params);
}

const DistributionSpec& DistRegistry::resolve(const std::string& id) {
    auto it = dists_.find(id);
    if (it != dists_.end()) return it->second;
    auto builtin = parseBuiltinDistribution(id);
    if (!builtin) throw UnknownDistributionError("unknown distribution '" + id + "'");
    auto [pos, ok] = dists_.emplace(builtin->id, std::move(*builtin));
    return pos->second;
}

void DistRegistry::add(DistributionSpec d) {
    if (!d.meanInsideHull())
        throw InvalidParametersError("distribution '" + d.id +
                                     "': mean lies outside the convex hull of the support");
    dists_[d.id] = std::move(d);
}

} // namespace stochinv
