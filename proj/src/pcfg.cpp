#include "stochinv/pcfg.hpp"

#include "stochinv/parser.hpp"
#include "stochinv/polyhedra.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>

namespace stochinv {

namespace {

// Union-find over provisional location ids used while applying the
// construction rules (sequencing and branching identify locations).
struct Builder {
    struct RawTrans {
        int src, dst, var;
        Update up;
        std::optional<Plp> guard;
        std::optional<Rat> prob;
    };
    std::vector<int> parent;
    std::vector<LocKind> kind;
    std::vector<RawTrans> trans;

    int fresh(LocKind k) {
        parent.push_back(static_cast<int>(parent.size()));
        kind.push_back(k);
        return static_cast<int>(parent.size()) - 1;
    }
    int find(int x) { return parent[static_cast<size_t>(x)] == x ? x : parent[static_cast<size_t>(x)] = find(parent[static_cast<size_t>(x)]); }
    void unite(int a, int b) {  // b's class absorbs a's
        a = find(a);
        b = find(b);
        if (a != b) parent[static_cast<size_t>(a)] = b;
        if (kind[static_cast<size_t>(b)] == LocKind::Det) kind[static_cast<size_t>(b)] = kind[static_cast<size_t>(a)];
    }

    struct Frag { int in, out; };

    Frag build(const Stmt* s) {
        switch (s->kind) {
            case Stmt::Kind::Skip: {
                int in = fresh(LocKind::Det), out = fresh(LocKind::Det);
                trans.push_back({in, out, 0, Update{}, std::nullopt, std::nullopt});
                return {in, out};
            }
            case Stmt::Kind::AssignAffine: {
                int in = fresh(LocKind::Det), out = fresh(LocKind::Det);
                Update u;
                u.kind = Update::Kind::Affine;
                u.expr = s->expr;
                trans.push_back({in, out, s->var, std::move(u), std::nullopt, std::nullopt});
                return {in, out};
            }
            case Stmt::Kind::AssignSample: {
                int in = fresh(LocKind::Det), out = fresh(LocKind::Det);
                Update u;
                u.kind = Update::Kind::Sample;
                u.distId = s->distId;
                u.expr = s->expr;  // additive shift
                trans.push_back({in, out, s->var, std::move(u), std::nullopt, std::nullopt});
                return {in, out};
            }
            case Stmt::Kind::AssignChoose: {
                int in = fresh(LocKind::Det), out = fresh(LocKind::Det);
                Update u;
                u.kind = Update::Kind::Choose;
                u.set = s->dom;
                trans.push_back({in, out, s->var, std::move(u), std::nullopt, std::nullopt});
                return {in, out};
            }
            case Stmt::Kind::Seq: {
                Frag f1 = build(s->a.get());
                Frag f2 = build(s->b.get());
                unite(f2.in, f1.out);
                return {f1.in, f2.out};
            }
            case Stmt::Kind::While: {
                Frag body = build(s->a.get());
                int head = fresh(LocKind::Det);
                unite(head, body.out);  // the head is the body's out location
                head = find(body.out);
                int out = fresh(LocKind::Det);
                trans.push_back({head, body.in, 0, Update{}, s->guard, std::nullopt});
                trans.push_back({head, out, 0, Update{}, negatePlp(s->guard), std::nullopt});
                return {head, out};
            }
            case Stmt::Kind::IfGuard:
            case Stmt::Kind::IfProb:
            case Stmt::Kind::IfStar: {
                Frag f1 = build(s->a.get());
                Frag f2 = build(s->b.get());
                LocKind k = s->kind == Stmt::Kind::IfProb  ? LocKind::Prob
                            : s->kind == Stmt::Kind::IfStar ? LocKind::Nondet
                                                            : LocKind::Det;
                int in = fresh(k);
                unite(f2.out, f1.out);
                if (s->kind == Stmt::Kind::IfProb) {
                    trans.push_back({in, f1.in, 0, Update{}, std::nullopt, s->prob});
                    trans.push_back({in, f2.in, 0, Update{}, std::nullopt, Rat(1) - s->prob});
                } else if (s->kind == Stmt::Kind::IfStar) {
                    trans.push_back({in, f1.in, 0, Update{}, std::nullopt, std::nullopt});
                    trans.push_back({in, f2.in, 0, Update{}, std::nullopt, std::nullopt});
                } else {
                    trans.push_back({in, f1.in, 0, Update{}, s->guard, std::nullopt});
                    trans.push_back({in, f2.in, 0, Update{}, negatePlp(s->guard), std::nullopt});
                }
                return {in, find(f1.out)};
            }
        }
        throw Error("internal: unknown statement kind", 4);
    }
};

} // namespace

Pcfg buildPcfg(const Ast& ast) {
    Pcfg p;
    p.vars = ast.vars;
    p.dists = ast.dists;
    p.initVal.assign(static_cast<size_t>(ast.vars.size()), Rat(0));
    for (const auto& [v, q] : ast.preamble) p.initVal[static_cast<size_t>(v)] = q;

    Builder b;
    Builder::Frag frag{};
    if (ast.body) {
        frag = b.build(ast.body.get());
    } else {
        int only = b.fresh(LocKind::Det);
        frag = {only, only};
    }

    int initRaw = b.find(frag.in);
    int outRaw = b.find(frag.out);
    // Terminal self-loop.
    b.trans.push_back({outRaw, outRaw, 0, Update{}, std::nullopt, std::nullopt});

    // Default guards on Det transitions.
    for (auto& t : b.trans) {
        t.src = b.find(t.src);
        t.dst = b.find(t.dst);
        if (b.kind[static_cast<size_t>(t.src)] == LocKind::Det && !t.guard) t.guard = Plp::top();
        if (b.kind[static_cast<size_t>(t.src)] != LocKind::Det) t.guard.reset();
    }

    // Renumber reachable classes in BFS order from the initial location.
    std::map<int, int> number;
    std::deque<int> queue{initRaw};
    number[initRaw] = 0;
    std::vector<int> order{initRaw};
    while (!queue.empty()) {
        int cur = queue.front();
        queue.pop_front();
        for (const auto& t : b.trans) {
            if (t.src != cur) continue;
            if (!number.count(t.dst)) {
                number[t.dst] = static_cast<int>(order.size());
                order.push_back(t.dst);
                queue.push_back(t.dst);
            }
        }
    }

    p.locations.resize(order.size());
    for (size_t i = 0; i < order.size(); ++i) {
        p.locations[i].name = "l" + std::to_string(i);
        p.locations[i].kind = b.kind[static_cast<size_t>(order[i])];
        p.locations[i].terminal = order[i] == outRaw;
    }
    p.initLoc = 0;
    for (const auto& t : b.trans) {
        if (!number.count(t.src)) continue;  // unreachable fragment
        Transition out;
        out.source = number[t.src];
        out.target = number[t.dst];
        out.var = t.var;
        out.update = t.up;
        out.guard = t.guard;
        out.prob = t.prob;
        p.transitions.push_back(std::move(out));
    }
    std::stable_sort(p.transitions.begin(), p.transitions.end(),
                     [](const Transition& a, const Transition& c) { return a.source < c.source; });
    return p;
}

namespace {

Update parseUpdate(Lexer& lx, VarTable& vars, DistRegistry& dists) {
    Update u;
    const Token& t = lx.peek();
    if (t.kind != Token::Kind::Ident) lx.fail("expected an update kind");
    std::string kw = t.text;
    if (kw == "id") {
        lx.next();
        u.kind = Update::Kind::Identity;
        return u;
    }
    if (kw == "affine") {
        lx.next();
        u.kind = Update::Kind::Affine;
        u.expr = parseAffine(lx, vars, false);
        return u;
    }
    if (kw == "sample") {
        lx.next();
        u.kind = Update::Kind::Sample;
        if (lx.peek().kind != Token::Kind::Ident) lx.fail("expected a distribution id");
        std::string id = lx.next().text;
        if (!dists.has(id)) {
            // builtin syntax like uniform(-2,1)
            if (lx.peek().kind == Token::Kind::Punct && lx.peek().text == "(") {
                std::ostringstream spec;
                spec << id << "(";
                lx.next();
                bool first = true;
                while (!(lx.peek().kind == Token::Kind::Punct && lx.peek().text == ")")) {
                    if (!first) {
                        if (!(lx.peek().kind == Token::Kind::Punct && lx.peek().text == ",")) lx.fail("expected ','");
                        lx.next();
                        spec << ",";
                    }
                    spec << ratDecimalStr(parseNumberToken(lx));
                    first = false;
                }
                lx.next();
                spec << ")";
                id = spec.str();
            }
            const DistributionSpec& d = dists.resolve(id);
            id = d.id;
        }
        u.distId = id;
        if (lx.peek().kind == Token::Kind::Ident && lx.peek().text == "shift") {
            lx.next();
            u.expr = parseAffine(lx, vars, false);
        }
        return u;
    }
    if (kw == "choose") {
        lx.next();
        u.kind = Update::Kind::Choose;
        u.set = parseSetSpec(lx);
        return u;
    }
    lx.fail("expected update kind 'affine', 'sample', 'choose' or 'id'");
}

} // namespace

Pcfg parsePcfgFile(const std::string& text) {
    Pcfg p;
    bool sawVars = false, sawInit = false;
    std::map<std::string, int> locIdx;

    std::istringstream in(text);
    std::string line;
    int lineNo = 0;
    std::vector<std::pair<int, std::string>> pendingLines;
    while (std::getline(in, line)) {
        ++lineNo;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        bool blank = true;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) { blank = false; break; }
        if (!blank) pendingLines.emplace_back(lineNo, line);
    }

    // First pass: vars, locations, dists; second pass: init and edges.
    for (auto& [ln, text1] : pendingLines) {
        Lexer lx(text1);
        if (lx.peek().kind != Token::Kind::Ident) throw FormatError("line " + std::to_string(ln) + ": expected a directive");
        std::string head = lx.peek().text;
        if (head == "vars") {
            lx.next();
            while (lx.peek().kind == Token::Kind::Ident) p.vars.intern(lx.next().text);
            sawVars = true;
        } else if (head == "loc") {
            lx.next();
            if (lx.peek().kind != Token::Kind::Ident) throw FormatError("line " + std::to_string(ln) + ": expected a location id");
            std::string name = lx.next().text;
            if (locIdx.count(name)) throw FormatError("line " + std::to_string(ln) + ": duplicate location '" + name + "'");
            Location loc;
            loc.name = name;
            if (lx.peek().kind != Token::Kind::Ident) throw FormatError("line " + std::to_string(ln) + ": expected det|prob|nondet");
            std::string kind = lx.next().text;
            if (kind == "det") loc.kind = LocKind::Det;
            else if (kind == "prob") loc.kind = LocKind::Prob;
            else if (kind == "nondet") loc.kind = LocKind::Nondet;
            else throw FormatError("line " + std::to_string(ln) + ": bad location kind '" + kind + "'");
            if (lx.peek().kind == Token::Kind::Ident && lx.peek().text == "terminal") {
                lx.next();
                loc.terminal = true;
            }
            locIdx[name] = static_cast<int>(p.locations.size());
            p.locations.push_back(std::move(loc));
        } else if (head == "dist") {
            lx.next();
            if (lx.peek().kind != Token::Kind::Ident) throw FormatError("line " + std::to_string(ln) + ": expected a distribution id");
            DistributionSpec d;
            d.id = lx.next().text;
            if (!(lx.peek().kind == Token::Kind::Ident && lx.peek().text == "mean"))
                throw FormatError("line " + std::to_string(ln) + ": expected 'mean'");
            lx.next();
            d.mean = parseNumberToken(lx);
            if (!(lx.peek().kind == Token::Kind::Ident && lx.peek().text == "support"))
                throw FormatError("line " + std::to_string(ln) + ": expected 'support'");
            lx.next();
            VarTable dvar;
            dvar.intern("x");
            try {
                d.support = toDnf(parsePredicate(lx, dvar, false));
            } catch (const UninitializedVariableError&) {
                throw FormatError("line " + std::to_string(ln) + ": support must be a single-variable predicate over x");
            }
            try {
                p.dists.add(std::move(d));
            } catch (const InvalidParametersError& e) {
                throw FormatError("line " + std::to_string(ln) + ": " + e.what());
            }
        }
    }
    if (!sawVars) throw FormatError("missing 'vars' line");
    if (p.locations.empty()) throw FormatError("no locations declared");

    for (auto& [ln, text1] : pendingLines) {
        Lexer lx(text1);
        std::string head = lx.peek().text;
        auto locOf = [&](const std::string& n) {
            auto it = locIdx.find(n);
            if (it == locIdx.end())
                throw DanglingLocationError("line " + std::to_string(ln) + ": unknown location '" + n + "'");
            return it->second;
        };
        if (head == "init") {
            lx.next();
            if (lx.peek().kind != Token::Kind::Ident) throw FormatError("line " + std::to_string(ln) + ": expected a location id");
            p.initLoc = locOf(lx.next().text);
            p.initVal.clear();
            while (lx.peek().kind != Token::Kind::End) p.initVal.push_back(parseNumberToken(lx));
            if (static_cast<int>(p.initVal.size()) != p.vars.size())
                throw FormatError("line " + std::to_string(ln) + ": init vector has " +
                                  std::to_string(p.initVal.size()) + " entries for " +
                                  std::to_string(p.vars.size()) + " variables");
            sawInit = true;
        } else if (head == "edge") {
            lx.next();
            Transition t;
            if (lx.peek().kind != Token::Kind::Ident) throw FormatError("line " + std::to_string(ln) + ": expected source location");
            t.source = locOf(lx.next().text);
            if (lx.peek().kind != Token::Kind::Ident) throw FormatError("line " + std::to_string(ln) + ": expected target location");
            t.target = locOf(lx.next().text);
            if (!(lx.peek().kind == Token::Kind::Ident && lx.peek().text == "var"))
                throw FormatError("line " + std::to_string(ln) + ": expected 'var'");
            lx.next();
            if (lx.peek().kind != Token::Kind::Ident) throw FormatError("line " + std::to_string(ln) + ": expected a variable name");
            std::string vn = lx.next().text;
            int v = p.vars.find(vn);
            if (v < 0) throw FormatError("line " + std::to_string(ln) + ": unknown variable '" + vn + "'");
            t.var = v;
            if (!(lx.peek().kind == Token::Kind::Ident && lx.peek().text == "update"))
                throw FormatError("line " + std::to_string(ln) + ": expected 'update'");
            lx.next();
            try {
                t.update = parseUpdate(lx, p.vars, p.dists);
            } catch (const SyntaxError& e) {
                throw FormatError("line " + std::to_string(ln) + ": " + e.what());
            }
            while (lx.peek().kind == Token::Kind::Ident) {
                std::string kw = lx.peek().text;
                if (kw == "guard") {
                    lx.next();
                    t.guard = toDnf(parsePredicate(lx, p.vars, false));
                } else if (kw == "prob") {
                    lx.next();
                    t.prob = parseNumberToken(lx);
                } else {
                    throw FormatError("line " + std::to_string(ln) + ": unexpected '" + kw + "'");
                }
            }
            const Location& src = p.locations[static_cast<size_t>(t.source)];
            if (src.kind == LocKind::Det && !t.guard) t.guard = Plp::top();
            if (src.kind != LocKind::Det && t.guard)
                throw FormatError("line " + std::to_string(ln) + ": guards only on transitions out of det locations");
            if (src.kind == LocKind::Prob && !t.prob)
                throw FormatError("line " + std::to_string(ln) + ": transitions out of prob locations need 'prob'");
            if (src.kind != LocKind::Prob && t.prob)
                throw FormatError("line " + std::to_string(ln) + ": 'prob' only on transitions out of prob locations");
            if (t.update.kind == Update::Kind::Choose && src.kind != LocKind::Det)
                throw FormatError("line " + std::to_string(ln) + ": choose updates only out of det locations");
            if (t.update.kind == Update::Kind::Sample && !p.dists.has(t.update.distId))
                throw FormatError("line " + std::to_string(ln) + ": unknown distribution '" + t.update.distId + "'");
            p.transitions.push_back(std::move(t));
        }
    }
    if (!sawInit) throw FormatError("missing 'init' line");

    for (int l = 0; l < p.numLocations(); ++l)
        if (p.outgoing(l).empty())
            throw DanglingLocationError("location '" + p.locations[static_cast<size_t>(l)].name +
                                        "' has no outgoing transition");
    for (int l = 0; l < p.numLocations(); ++l) {
        if (p.locations[static_cast<size_t>(l)].kind != LocKind::Prob) continue;
        Rat sum(0);
        for (int ti : p.outgoing(l)) {
            const auto& t = p.transitions[static_cast<size_t>(ti)];
            if (t.prob && *t.prob < 0)
                throw ProbSumNotOneError("location '" + p.locations[static_cast<size_t>(l)].name +
                                         "': negative transition probability");
            sum += t.prob ? *t.prob : Rat(0);
        }
        if (sum != 1)
            throw ProbSumNotOneError("location '" + p.locations[static_cast<size_t>(l)].name +
                                     "': outgoing probabilities sum to " + ratStr(sum) + ", expected 1");
    }
    return p;
}

std::vector<Diagnostic> validatePcfg(const Pcfg& p) {
    std::vector<Diagnostic> out;
    auto add = [&](int loc, const std::string& inv, const std::string& msg) {
        out.push_back(Diagnostic{loc, inv, msg});
    };

    for (int l = 0; l < p.numLocations(); ++l) {
        const Location& loc = p.locations[static_cast<size_t>(l)];
        auto outs = p.outgoing(l);
        if (outs.empty()) {
            add(l, "outgoing", "location '" + loc.name + "' has no outgoing transition");
            continue;
        }
        if (loc.kind == LocKind::Prob) {
            Rat sum(0);
            bool bad = false;
            for (int ti : outs) {
                const auto& t = p.transitions[static_cast<size_t>(ti)];
                if (!t.prob || *t.prob < 0) bad = true;
                else sum += *t.prob;
            }
            if (bad || sum != 1)
                add(l, "prob-sum", "location '" + loc.name + "': outgoing probabilities must be nonnegative and sum to 1");
        }
        if (loc.kind == LocKind::Det) {
            // pairwise exclusivity
            for (size_t i = 0; i < outs.size(); ++i) {
                for (size_t j = i + 1; j < outs.size(); ++j) {
                    const auto& gi = p.transitions[static_cast<size_t>(outs[i])].guard;
                    const auto& gj = p.transitions[static_cast<size_t>(outs[j])].guard;
                    if (!gi || !gj) continue;
                    // Strict constraints are decided as written by the
                    // two-phase LP (closure feasibility, then margin
                    // maximization), so complementary halves sharing only a
                    // strict boundary are recognized as disjoint.
                    Plp both = andPlp(*gi, *gj);
                    for (const auto& d : both.disjuncts) {
                        StrictSatResult s = satisfiableStrict(d);
                        if (s.satisfiable) {
                            add(l, "guard-exclusive",
                                "location '" + loc.name + "': guards of transitions " + std::to_string(outs[i]) +
                                    " and " + std::to_string(outs[j]) + " overlap");
                            break;
                        }
                    }
                }
            }
            // exhaustiveness: the complement of the union must be empty
            Plp comp = Plp::top();
            bool capped = false;
            for (int ti : outs) {
                const auto& g = p.transitions[static_cast<size_t>(ti)].guard;
                if (!g) continue;
                try {
                    comp = andPlp(comp, negatePlp(*g));
                } catch (const BlowupLimitError&) {
                    capped = true;
                    break;
                }
            }
            if (capped) {
                add(l, "guard-exhaustive", "location '" + loc.name + "': exhaustiveness check exceeded the DNF cap");
            } else {
                for (const auto& d : comp.disjuncts) {
                    StrictSatResult s = satisfiableStrict(d);
                    if (s.satisfiable) {
                        add(l, "guard-exhaustive",
                            "location '" + loc.name + "': guards are not exhaustive (uncovered region exists)");
                        break;
                    }
                }
            }
        }
        for (int ti : outs) {
            const auto& t = p.transitions[static_cast<size_t>(ti)];
            if (t.var < 0 || t.var >= p.vars.size())
                add(l, "var-index", "transition " + std::to_string(ti) + ": variable index out of range");
            if (t.update.kind == Update::Kind::Choose && loc.kind != LocKind::Det)
                add(l, "choose-on-det", "transition " + std::to_string(ti) + ": choose update out of a non-det location");
            if (t.update.kind == Update::Kind::Sample && !p.dists.has(t.update.distId))
                add(l, "dist-known", "transition " + std::to_string(ti) + ": unknown distribution");
        }
    }
    if (static_cast<int>(p.initVal.size()) != p.vars.size())
        add(p.initLoc, "init-dim", "initial valuation dimension does not match the variable list");
    for (const auto& [id, d] : p.dists.all())
        if (!d.meanInsideHull())
            add(-1, "dist-mean", "distribution '" + id + "': mean outside the support hull");
    return out;
}

std::string printPcfg(const Pcfg& p) {
    std::ostringstream os;
    os << "vars";
    for (const auto& n : p.vars.names()) os << " " << n;
    os << "\n";
    for (const auto& loc : p.locations) {
        os << "loc " << loc.name << " "
           << (loc.kind == LocKind::Det ? "det" : loc.kind == LocKind::Prob ? "prob" : "nondet");
        if (loc.terminal) os << " terminal";
        os << "\n";
    }
    os << "init " << p.locations[static_cast<size_t>(p.initLoc)].name;
    for (const auto& v : p.initVal) os << " " << ratDecimalStr(v);
    os << "\n";
    for (const auto& [id, d] : p.dists.all()) {
        VarTable dv;
        dv.intern("x");
        // builtin ids like uniform(-2,1) are resolvable without a dist line
        if (parseBuiltinDistribution(id)) continue;
        os << "dist " << id << " mean " << ratDecimalStr(d.mean) << " support " << plpStr(d.support, dv) << "\n";
    }
    for (const auto& t : p.transitions) {
        os << "edge " << p.locations[static_cast<size_t>(t.source)].name << " "
           << p.locations[static_cast<size_t>(t.target)].name << " var " << p.vars.name(t.var) << " update ";
        switch (t.update.kind) {
            case Update::Kind::Identity: os << "id"; break;
            case Update::Kind::Affine: os << "affine " << exprStr(t.update.expr, p.vars); break;
            case Update::Kind::Sample:
                os << "sample " << t.update.distId;
                if (!t.update.expr.isZero()) os << " shift " << exprStr(t.update.expr, p.vars);
                break;
            case Update::Kind::Choose: os << "choose " << setSpecStr(t.update.set); break;
        }
        if (t.guard && !t.guard->isTrue()) os << " guard " << plpStr(*t.guard, p.vars);
        if (t.prob) os << " prob " << ratDecimalStr(*t.prob);
        os << "\n";
    }
    return os.str();
}

} // namespace stochinv
