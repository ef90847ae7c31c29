#include "stochinv/certificates.hpp"

#include "stochinv/parser.hpp"

#include <sstream>

namespace stochinv {

PredMap negatePredMap(const PredMap& m, const Pcfg& p) {
    PredMap out = PredMap::bottom();
    if (!m.dflt.isPolyhedral()) throw NotPolyhedralError("predicate map default is not polyhedral");
    out.dflt = negatePlp(m.dflt);
    for (int l = 0; l < p.numLocations(); ++l) {
        const Plp& plp = m(l);
        if (!plp.isPolyhedral())
            throw NotPolyhedralError("predicate at location '" + p.locations[static_cast<size_t>(l)].name +
                                     "' is not polyhedral");
        out.set(l, negatePlp(plp));
    }
    return out;
}

PredMap andPredMap(const PredMap& a, const PredMap& b, const Pcfg& p) {
    PredMap out;
    out.dflt = andPlp(a.dflt, b.dflt);
    for (int l = 0; l < p.numLocations(); ++l) out.set(l, andPlp(a(l), b(l)));
    return out;
}

namespace {

std::vector<std::pair<int, std::string>> nonBlankLines(const std::string& text) {
    std::vector<std::pair<int, std::string>> out;
    std::istringstream in(text);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        bool blank = true;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) { blank = false; break; }
        if (!blank) out.emplace_back(n, line);
    }
    return out;
}

int requireLoc(const Pcfg& p, const std::string& name, int line) {
    int l = p.locByName(name);
    if (l < 0) throw FormatError("line " + std::to_string(line) + ": unknown location '" + name + "'");
    return l;
}

} // namespace

Certificate parseCertificate(const std::string& text, const Pcfg& p) {
    Certificate cert;
    cert.invariant = PredMap::top();
    cert.target = PredMap::bottom();
    bool sawKind = false, sawEps = false, sawC = false, sawM0 = false;
    VarTable vars = p.vars;
    for (auto& [ln, raw] : nonBlankLines(text)) {
        Lexer lx(raw);
        if (lx.peek().kind != Token::Kind::Ident) throw FormatError("line " + std::to_string(ln) + ": expected a directive");
        std::string head = lx.next().text;
        try {
            if (head == "kind") {
                std::string k = lx.next().text;
                if (k == "rsm") cert.kind = CertKind::Rsm;
                else if (k == "repsm") cert.kind = CertKind::RepSm;
                else throw FormatError("line " + std::to_string(ln) + ": kind must be rsm or repsm");
                sawKind = true;
            } else if (head == "eps") {
                cert.eps = parseNumberToken(lx);
                sawEps = true;
            } else if (head == "c") {
                cert.c = parseNumberToken(lx);
                sawC = true;
            } else if (head == "m0") {
                cert.m0 = parseNumberToken(lx);
                sawM0 = true;
            } else if (head == "eta") {
                int loc = requireLoc(p, lx.next().text, ln);
                if (!(lx.peek().kind == Token::Kind::Punct && (lx.peek().text == "=" || lx.peek().text == ":")))
                    throw FormatError("line " + std::to_string(ln) + ": expected '='");
                lx.next();
                cert.eta.at[loc] = parseAffine(lx, vars, false);
            } else if (head == "invariant" || head == "target") {
                int loc = requireLoc(p, lx.next().text, ln);
                if (lx.peek().kind == Token::Kind::Punct && lx.peek().text == ":") lx.next();
                Plp plp = toDnf(parsePredicate(lx, vars, false));
                if (head == "invariant") cert.invariant.set(loc, std::move(plp));
                else cert.target.set(loc, std::move(plp));
            } else {
                throw FormatError("line " + std::to_string(ln) + ": unknown directive '" + head + "'");
            }
        } catch (const SyntaxError& e) {
            throw FormatError("line " + std::to_string(ln) + ": " + e.what());
        } catch (const UninitializedVariableError& e) {
            throw FormatError("line " + std::to_string(ln) + ": " + e.what());
        }
    }
    if (!sawKind || !sawEps || !sawC) throw FormatError("certificate needs kind, eps and c lines");
    if (!cert.eta.total(p)) throw FormatError("certificate must give eta for every location");
    if (cert.eps < 0) throw FormatError("eps must be nonnegative");
    if (cert.c < cert.eps) throw FormatError("difference bound c must satisfy c >= eps");
    if (!sawM0) cert.m0 = cert.eta.value(p.initLoc, p.initVal);
    return cert;
}

std::string printCertificate(const Certificate& cert, const Pcfg& p) {
    std::ostringstream os;
    os << "kind " << (cert.kind == CertKind::Rsm ? "rsm" : "repsm") << "\n";
    os << "eps " << ratDecimalStr(cert.eps) << "\n";
    os << "c " << ratDecimalStr(cert.c) << "\n";
    os << "m0 " << ratDecimalStr(cert.m0) << "\n";
    for (int l = 0; l < p.numLocations(); ++l)
        os << "eta " << p.locations[static_cast<size_t>(l)].name << " = "
           << exprStr(cert.eta(l), p.vars) << "\n";
    for (int l = 0; l < p.numLocations(); ++l)
        if (!cert.invariant(l).isTrue())
            os << "invariant " << p.locations[static_cast<size_t>(l)].name << " "
               << plpStr(cert.invariant(l), p.vars) << "\n";
    for (int l = 0; l < p.numLocations(); ++l)
        if (!cert.target(l).isFalse())
            os << "target " << p.locations[static_cast<size_t>(l)].name << " "
               << plpStr(cert.target(l), p.vars) << "\n";
    return os.str();
}

PredMap parsePredMapFile(const std::string& text, const Pcfg& p, bool defaultTrue) {
    PredMap m = defaultTrue ? PredMap::top() : PredMap::bottom();
    VarTable vars = p.vars;
    for (auto& [ln, raw] : nonBlankLines(text)) {
        Lexer lx(raw);
        if (lx.peek().kind != Token::Kind::Ident) throw FormatError("line " + std::to_string(ln) + ": expected a location id");
        std::string name = lx.next().text;
        if (name == "terminal" && lx.peek().kind == Token::Kind::End) {
            for (int l = 0; l < p.numLocations(); ++l)
                if (p.isTerminal(l)) m.set(l, Plp::top());
            continue;
        }
        int loc = requireLoc(p, name, ln);
        if (lx.peek().kind == Token::Kind::Punct && lx.peek().text == ":") lx.next();
        try {
            m.set(loc, toDnf(parsePredicate(lx, vars, false)));
        } catch (const SyntaxError& e) {
            throw FormatError("line " + std::to_string(ln) + ": " + e.what());
        } catch (const UninitializedVariableError& e) {
            throw FormatError("line " + std::to_string(ln) + ": " + e.what());
        }
    }
    return m;
}

std::string printPredMap(const PredMap& m, const Pcfg& p) {
    std::ostringstream os;
    for (int l = 0; l < p.numLocations(); ++l) {
        const Plp& plp = m(l);
        if ((m.dflt.isTrue() && plp.isTrue()) || (m.dflt.isFalse() && plp.isFalse())) continue;
        os << p.locations[static_cast<size_t>(l)].name << " : " << plpStr(plp, p.vars) << "\n";
    }
    return os.str();
}

StochasticInvariant parseStochInvFile(const std::string& text, const Pcfg& p) {
    StochasticInvariant si;
    si.pi = PredMap::top();
    bool sawP = false;
    VarTable vars = p.vars;
    for (auto& [ln, raw] : nonBlankLines(text)) {
        Lexer lx(raw);
        if (lx.peek().kind != Token::Kind::Ident) throw FormatError("line " + std::to_string(ln) + ": expected 'p' or a location id");
        std::string head = lx.next().text;
        if (head == "p") {
            si.p = parseNumberToken(lx);
            if (si.p < 0 || si.p > 1)
                throw FormatError("line " + std::to_string(ln) + ": p must lie in [0,1]");
            sawP = true;
            continue;
        }
        int loc = requireLoc(p, head, ln);
        if (lx.peek().kind == Token::Kind::Punct && lx.peek().text == ":") lx.next();
        try {
            si.pi.set(loc, toDnf(parsePredicate(lx, vars, false)));
        } catch (const SyntaxError& e) {
            throw FormatError("line " + std::to_string(ln) + ": " + e.what());
        }
    }
    if (!sawP) throw FormatError("stochastic invariant file needs a 'p' line");
    return si;
}

std::string printStochInv(const StochasticInvariant& si, const Pcfg& p) {
    std::ostringstream os;
    os << "p " << ratDecimalStr(si.p) << "\n" << printPredMap(si.pi, p);
    return os.str();
}

} // namespace stochinv
