#pragma once

#include "stochinv/bounds.hpp"
#include "stochinv/check.hpp"
#include "stochinv/parser.hpp"
#include "stochinv/sim.hpp"
#include "stochinv/synth.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>

namespace testutil {

using namespace stochinv;

inline std::string slurpData(const std::string& name) {
    std::ifstream in(std::string(STOCHINV_DATA_DIR) + "/" + name);
    REQUIRE_MESSAGE(in.good(), "missing data file ", name);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline Rat R(const std::string& s) {
    auto r = parseRat(s);
    REQUIRE_MESSAGE(r.has_value(), "bad rational literal ", s);
    return *r;
}

inline Plp plpOf(const std::string& text, VarTable& vars) {
    Lexer lx(text);
    return toDnf(parsePredicate(lx, vars, true));
}

inline Assertion assertionOf(const std::string& text, VarTable& vars) {
    Plp p = plpOf(text, vars);
    REQUIRE(p.disjuncts.size() == 1);
    return p.disjuncts[0];
}

inline AffineExpr exprOf(const std::string& text, VarTable& vars) {
    Lexer lx(text);
    return parseAffine(lx, vars, true);
}

inline Pcfg loadPcfg(const std::string& name) { return parsePcfgFile(slurpData(name)); }

inline Certificate loadCert(const std::string& name, const Pcfg& p) {
    return parseCertificate(slurpData(name), p);
}

inline double dbl(const BigFloat& f) { return static_cast<double>(f); }

} // namespace testutil
