#include "stochinv/parser.hpp"

#include <cctype>
#include <set>
#include <sstream>

namespace stochinv {

namespace {

bool isIdentStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool isIdentChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Unicode glyphs accepted in source text, mapped to ASCII.
struct Glyph { const char* utf8; const char* ascii; };
constexpr Glyph kGlyphs[] = {
    {"\xE2\x89\xA4", "<="},   // <=
    {"\xE2\x89\xA5", ">="},   // >=
    {"\xC2\xAC", "not "},     // negation sign
    {"\xE2\x8B\x86", "*"},    // star
    {"\xC2\xB7", "*"},        // middle dot (multiplication)
    {"\xE2\x88\x92", "-"},    // unicode minus
    {"\xE2\x88\x97", "*"},    // asterisk operator
};

std::string normalizeGlyphs(const std::string& in) {
    std::string out;
    out.reserve(in.size());
    size_t i = 0;
    while (i < in.size()) {
        bool matched = false;
        for (const auto& g : kGlyphs) {
            size_t len = std::char_traits<char>::length(g.utf8);
            if (in.compare(i, len, g.utf8) == 0) {
                out += g.ascii;
                i += len;
                matched = true;
                break;
            }
        }
        if (!matched) out += in[i++];
    }
    return out;
}

} // namespace

Lexer::Lexer(const std::string& source) { lexAll(normalizeGlyphs(source)); }

void Lexer::lexAll(const std::string& src) {
    int line = 1, col = 1;
    size_t i = 0;
    auto push = [&](Token t) { toks_.push_back(std::move(t)); };
    while (i < src.size()) {
        char c = src[i];
        if (c == '\n') {
            push(Token{Token::Kind::Newline, "\n", Rat(0), line, col});
            ++line;
            col = 1;
            ++i;
            continue;
        }
        if (c == '#') {  // comment to end of line
            while (i < src.size() && src[i] != '\n') ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            ++col;
            continue;
        }
        int tl = line, tc = col;
        if (isIdentStart(c)) {
            std::string id;
            while (i < src.size() && isIdentChar(src[i])) {
                id += src[i++];
                ++col;
            }
            push(Token{Token::Kind::Ident, id, Rat(0), tl, tc});
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string num;
            while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) { num += src[i++]; ++col; }
            if (i < src.size() && src[i] == '.' && i + 1 < src.size() &&
                std::isdigit(static_cast<unsigned char>(src[i + 1])))
            {
                num += src[i++]; ++col;
                while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) { num += src[i++]; ++col; }
            }
            if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
                size_t j = i + 1;
                if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
                if (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
                    while (i < j) { num += src[i++]; ++col; }
                    while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) { num += src[i++]; ++col; }
                }
            }
            auto r = parseRat(num);
            if (!r) throw SyntaxError(tl, tc, "bad number literal '" + num + "'");
            push(Token{Token::Kind::Number, num, *r, tl, tc});
            continue;
        }
        auto two = src.substr(i, 2);
        if (two == ":=" || two == "<=" || two == ">=" || two == "==") {
            push(Token{Token::Kind::Punct, two, Rat(0), tl, tc});
            i += 2;
            col += 2;
            continue;
        }
        static const std::string singles = ";(),[]+-*/<>=:@";
        if (singles.find(c) != std::string::npos) {
            push(Token{Token::Kind::Punct, std::string(1, c), Rat(0), tl, tc});
            ++i;
            ++col;
            continue;
        }
        throw SyntaxError(tl, tc, std::string("unexpected character '") + c + "'");
    }
    push(Token{Token::Kind::End, "", Rat(0), line, col});
}

const Token& Lexer::peek(int ahead) {
    size_t idx = pos_ + static_cast<size_t>(ahead);
    if (idx >= toks_.size()) idx = toks_.size() - 1;
    return toks_[idx];
}

Token Lexer::next() {
    Token t = peek();
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
}

void Lexer::fail(const std::string& msg) { failAt(peek(), msg); }

void Lexer::failAt(const Token& t, const std::string& msg) {
    throw SyntaxError(t.line, t.col, msg + (t.text.empty() ? "" : " (near '" + t.text + "')"));
}

namespace {

bool isIdent(const Token& t, const char* s) { return t.kind == Token::Kind::Ident && t.text == s; }
bool isPunct(const Token& t, const char* s) { return t.kind == Token::Kind::Punct && t.text == s; }

bool isKeyword(const std::string& s) {
    static const std::set<std::string> kw = {"if",   "then", "else", "fi",  "while", "do",   "od",
                                             "skip", "prob", "sample", "ndet", "and",  "or",  "not",
                                             "true", "false"};
    return kw.count(s) > 0;
}

void expectPunct(Lexer& lx, const char* s) {
    if (!isPunct(lx.peek(), s)) lx.fail(std::string("expected '") + s + "'");
    lx.next();
}
void expectIdent(Lexer& lx, const char* s) {
    if (!isIdent(lx.peek(), s)) lx.fail(std::string("expected '") + s + "'");
    lx.next();
}

Rat parseSignedNumber(Lexer& lx) {
    bool neg = false;
    while (isPunct(lx.peek(), "-") || isPunct(lx.peek(), "+")) {
        if (lx.next().text == "-") neg = !neg;
    }
    if (lx.peek().kind != Token::Kind::Number) lx.fail("expected a number");
    Rat v = lx.next().number;
    if (lx.peek().kind == Token::Kind::Punct && lx.peek().text == "/" &&
        lx.peek(1).kind == Token::Kind::Number)
    {
        lx.next();
        Rat d = lx.next().number;
        if (d == 0) lx.fail("zero denominator");
        v /= d;
    }
    return neg ? Rat(-v) : v;
}

// Affine expression parser; optionally records a single additive
// `sample(dist)` term (used for assignment right-hand sides).
struct AffineParse {
    AffineExpr expr;
    std::optional<std::string> sampleDist;  // present if a sample term occurred
};

class ExprParser {
public:
    ExprParser(Lexer& lx, VarTable& vars, bool allowNewVars, DistRegistry* dists)
        : lx_(lx), vars_(vars), allowNew_(allowNewVars), dists_(dists) {}

    AffineParse parseSum(bool allowSample) {
        AffineParse acc = parseTerm(allowSample, /*negated=*/false);
        for (;;) {
            if (isPunct(lx_.peek(), "+") || isPunct(lx_.peek(), "-")) {
                bool minus = lx_.next().text == "-";
                AffineParse rhs = parseTerm(allowSample, minus);
                acc.expr += rhs.expr;
                if (rhs.sampleDist) {
                    if (acc.sampleDist) lx_.fail("at most one sample(..) term per expression");
                    acc.sampleDist = rhs.sampleDist;
                }
            } else {
                break;
            }
        }
        return acc;
    }

private:
    AffineParse parseTerm(bool allowSample, bool negated) {
        // term := factor ('*' factor)*, where at most one factor may be a variable
        std::vector<AffineParse> factors;
        factors.push_back(parseFactor(allowSample));
        while (isPunct(lx_.peek(), "*")) {
            lx_.next();
            factors.push_back(parseFactor(false));
        }
        AffineParse out;
        out.expr = AffineExpr(Rat(1));
        for (auto& f : factors) {
            if (f.sampleDist) {
                if (factors.size() > 1) lx_.fail("sample(..) cannot be multiplied");
                out = std::move(f);
                break;
            }
            if (!f.expr.isConstant() && !out.expr.isConstant())
                lx_.fail("nonlinear product of variables");
            if (f.expr.isConstant()) out.expr *= f.expr.constant;
            else {
                Rat scale = out.expr.constant;
                out.expr = f.expr;
                out.expr *= scale;
            }
        }
        if (negated) {
            out.expr *= Rat(-1);
        }
        if (negated && out.sampleDist) lx_.fail("sample(..) cannot be negated");
        return out;
    }

    AffineParse parseFactor(bool allowSample) {
        const Token& t = lx_.peek();
        AffineParse out;
        if (t.kind == Token::Kind::Number) {
            out.expr = AffineExpr(parseSignedNumber(lx_));
            return out;
        }
        if (isPunct(t, "-")) {
            lx_.next();
            AffineParse inner = parseFactor(allowSample);
            if (inner.sampleDist) lx_.fail("sample(..) cannot be negated");
            inner.expr *= Rat(-1);
            return inner;
        }
        if (isPunct(t, "(")) {
            lx_.next();
            AffineParse inner = parseSum(allowSample);
            expectPunct(lx_, ")");
            return inner;
        }
        if (t.kind == Token::Kind::Ident) {
            if (t.text == "sample") {
                if (!allowSample || !dists_) lx_.fail("sample(..) is not allowed here");
                lx_.next();
                expectPunct(lx_, "(");
                std::string spec = parseDistSpec();
                expectPunct(lx_, ")");
                out.sampleDist = spec;
                return out;
            }
            if (isKeyword(t.text)) lx_.fail("unexpected keyword in expression");
            lx_.next();
            int v = allowNew_ ? vars_.intern(t.text) : vars_.find(t.text);
            if (v < 0) throw UninitializedVariableError(t.text);
            out.expr = AffineExpr::var(v);
            return out;
        }
        lx_.fail("expected an expression");
    }

    std::string parseDistSpec() {
        // name or name(params...)
        if (lx_.peek().kind != Token::Kind::Ident) lx_.fail("expected a distribution name");
        std::string name = lx_.next().text;
        if (!isPunct(lx_.peek(), "(")) return name;
        lx_.next();
        std::vector<Rat> params;
        if (!isPunct(lx_.peek(), ")")) {
            params.push_back(parseSignedNumber(lx_));
            while (isPunct(lx_.peek(), ",")) {
                lx_.next();
                params.push_back(parseSignedNumber(lx_));
            }
        }
        expectPunct(lx_, ")");
        DistributionSpec d = builtinDistribution(name, params);
        if (dists_ && !dists_->has(d.id)) dists_->add(d);
        return d.id;
    }

    Lexer& lx_;
    VarTable& vars_;
    bool allowNew_;
    DistRegistry* dists_;
};

class PredicateParser {
public:
    PredicateParser(Lexer& lx, VarTable& vars, bool allowNewVars)
        : lx_(lx), vars_(vars), allowNew_(allowNewVars) {}

    Formula parseOr() {
        Formula f = parseAnd();
        while (isIdent(lx_.peek(), "or")) {
            lx_.next();
            f = Formula::mkOr(std::move(f), parseAnd());
        }
        return f;
    }

private:
    Formula parseAnd() {
        Formula f = parseLiteral();
        while (isIdent(lx_.peek(), "and")) {
            lx_.next();
            f = Formula::mkAnd(std::move(f), parseLiteral());
        }
        return f;
    }

    Formula parseLiteral() {
        const Token& t = lx_.peek();
        if (isIdent(t, "not")) {
            lx_.next();
            return Formula::mkNot(parseLiteral());
        }
        if (isIdent(t, "true")) { lx_.next(); return Formula::mkTrue(); }
        if (isIdent(t, "false")) { lx_.next(); return Formula::mkFalse(); }
        if (isPunct(t, "(")) {
            // Could be a parenthesized formula or a parenthesized arithmetic
            // expression starting a comparison; try formula first.
            size_t save = lx_.mark();
            lx_.next();
            try {
                Formula inner = parseOr();
                expectPunct(lx_, ")");
                return inner;
            } catch (const Error&) {
                lx_.reset(save);
            }
        }
        return parseComparison();
    }

    Formula parseComparison() {
        ExprParser ep(lx_, vars_, allowNew_, nullptr);
        AffineExpr lhs = ep.parseSum(false).expr;
        const Token& op = lx_.peek();
        bool strict = false, geq = false;
        if (isPunct(op, "<=")) geq = false;
        else if (isPunct(op, ">=")) geq = true;
        else if (isPunct(op, "<")) { strict = true; geq = false; }
        else if (isPunct(op, ">")) { strict = true; geq = true; }
        else lx_.fail("expected a comparison operator");
        lx_.next();
        AffineExpr rhs = ep.parseSum(false).expr;
        AffineExpr e = geq ? rhs - lhs : lhs - rhs;  // e <= 0 / e < 0
        return Formula::mkAtom(LinearConstraint{std::move(e), strict});
    }

    Lexer& lx_;
    VarTable& vars_;
    bool allowNew_;
};

} // namespace

AffineExpr parseAffine(Lexer& lx, VarTable& vars, bool allowNewVars) {
    ExprParser ep(lx, vars, allowNewVars, nullptr);
    return ep.parseSum(false).expr;
}

Formula parsePredicate(Lexer& lx, VarTable& vars, bool allowNewVars) {
    PredicateParser pp(lx, vars, allowNewVars);
    return pp.parseOr();
}

Rat parseNumberToken(Lexer& lx) { return parseSignedNumber(lx); }

SetSpec parseSetSpec(Lexer& lx) {
    SetSpec spec;
    for (;;) {
        if (lx.peek().kind != Token::Kind::Ident) lx.fail("expected 'int' or 'real' domain");
        std::string kw = lx.next().text;
        for (auto& ch : kw) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        if (kw != "int" && kw != "real") lx.fail("expected 'int' or 'real' domain");
        SetInterval iv;
        iv.integral = kw == "int";
        if (isPunct(lx.peek(), "[")) {
            lx.next();
            if (isIdent(lx.peek(), "inf") || (isPunct(lx.peek(), "-") && isIdent(lx.peek(1), "inf"))) {
                while (isPunct(lx.peek(), "-")) lx.next();
                lx.next();  // unbounded below
            } else {
                iv.lo = parseSignedNumber(lx);
            }
            expectPunct(lx, ",");
            if (isIdent(lx.peek(), "inf") || (isPunct(lx.peek(), "+") && isIdent(lx.peek(1), "inf"))) {
                while (isPunct(lx.peek(), "+")) lx.next();
                lx.next();  // unbounded above
            } else {
                iv.hi = parseSignedNumber(lx);
            }
            expectPunct(lx, "]");
            if (iv.lo && iv.hi && *iv.lo > *iv.hi) lx.fail("empty interval in ndet domain");
        }
        spec.intervals.push_back(iv);
        if (isIdent(lx.peek(), "or")) {
            lx.next();
            continue;
        }
        break;
    }
    return spec;
}

std::string setSpecStr(const SetSpec& s) {
    std::ostringstream os;
    for (size_t i = 0; i < s.intervals.size(); ++i) {
        if (i) os << " or ";
        const auto& iv = s.intervals[i];
        os << (iv.integral ? "int" : "real");
        if (iv.lo || iv.hi) {
            os << "[" << (iv.lo ? ratDecimalStr(*iv.lo) : "-inf") << ","
               << (iv.hi ? ratDecimalStr(*iv.hi) : "inf") << "]";
        }
    }
    return os.str();
}

namespace {

class ProgramParser {
public:
    explicit ProgramParser(const std::string& source) : lx_(source) {}

    Ast parse() {
        Ast ast;
        skipSeparators();
        std::vector<StmtPtr> stmts;
        while (lx_.peek().kind != Token::Kind::End) {
            stmts.push_back(parseStmt(ast));
            if (!skipSeparators() && lx_.peek().kind != Token::Kind::End) lx_.fail("expected ';' or newline");
        }
        // Leading constant assignments form the preamble.
        size_t bodyStart = 0;
        std::set<int> seen;
        while (bodyStart < stmts.size()) {
            Stmt* s = stmts[bodyStart].get();
            if (s->kind != Stmt::Kind::AssignAffine || !s->expr.isConstant()) break;
            if (seen.count(s->var))
                throw SyntaxError(s->line, s->col,
                                  "variable '" + ast.vars.name(s->var) + "' assigned twice in the preamble");
            seen.insert(s->var);
            ast.preamble.emplace_back(s->var, s->expr.constant);
            ++bodyStart;
        }
        if (ast.preamble.empty() && !stmts.empty())
            throw SyntaxError(1, 1, "program must start with a preamble of 'var := constant' lines");
        StmtPtr body;
        for (size_t i = stmts.size(); i > bodyStart; --i) {
            StmtPtr cur = std::move(stmts[i - 1]);
            if (!body) body = std::move(cur);
            else {
                auto seq = std::make_unique<Stmt>();
                seq->kind = Stmt::Kind::Seq;
                seq->line = cur->line;
                seq->col = cur->col;
                seq->a = std::move(cur);
                seq->b = std::move(body);
                body = std::move(seq);
            }
        }
        ast.body = std::move(body);
        checkInitialized(ast);
        return ast;
    }

private:
    bool skipSeparators() {
        bool any = false;
        for (;;) {
            const Token& t = lx_.peek();
            if (t.kind == Token::Kind::Newline || isPunct(t, ";")) {
                lx_.next();
                any = true;
            } else {
                return any;
            }
        }
    }

    StmtPtr parseStmt(Ast& ast) {
        const Token& t = lx_.peek();
        auto s = std::make_unique<Stmt>();
        s->line = t.line;
        s->col = t.col;
        if (isIdent(t, "skip")) {
            lx_.next();
            s->kind = Stmt::Kind::Skip;
            return s;
        }
        if (isIdent(t, "while")) {
            lx_.next();
            Formula g = parsePredicate(lx_, ast.vars, true);
            s->guard = toDnf(g);
            expectIdent(lx_, "do");
            skipSeparators();
            s->a = parseSeqUntil(ast, {"od"});
            expectIdent(lx_, "od");
            s->kind = Stmt::Kind::While;
            return s;
        }
        if (isIdent(t, "if")) {
            lx_.next();
            if (isPunct(lx_.peek(), "*")) {
                lx_.next();
                s->kind = Stmt::Kind::IfStar;
            } else if (isIdent(lx_.peek(), "prob")) {
                lx_.next();
                expectPunct(lx_, "(");
                Rat p = parseSignedNumber(lx_);
                expectPunct(lx_, ")");
                if (p < 0 || p > 1)
                    throw SyntaxError(s->line, s->col, "probability literal must lie in [0,1]");
                s->kind = Stmt::Kind::IfProb;
                s->prob = p;
            } else {
                Formula g = parsePredicate(lx_, ast.vars, true);
                s->guard = toDnf(g);
                s->kind = Stmt::Kind::IfGuard;
            }
            expectIdent(lx_, "then");
            skipSeparators();
            s->a = parseSeqUntil(ast, {"else"});
            expectIdent(lx_, "else");
            skipSeparators();
            s->b = parseSeqUntil(ast, {"fi"});
            expectIdent(lx_, "fi");
            return s;
        }
        if (t.kind == Token::Kind::Ident && !isKeyword(t.text)) {
            std::string name = lx_.next().text;
            expectPunct(lx_, ":=");
            s->var = ast.vars.intern(name);
            if (isIdent(lx_.peek(), "ndet")) {
                lx_.next();
                expectPunct(lx_, "(");
                s->dom = parseSetSpec(lx_);
                expectPunct(lx_, ")");
                s->kind = Stmt::Kind::AssignChoose;
                return s;
            }
            ExprParser ep(lx_, ast.vars, true, &ast.dists);
            AffineParse rhs = ep.parseSum(true);
            if (rhs.sampleDist) {
                s->kind = Stmt::Kind::AssignSample;
                s->distId = *rhs.sampleDist;
                s->expr = rhs.expr;  // additive shift, often 0
            } else {
                s->kind = Stmt::Kind::AssignAffine;
                s->expr = rhs.expr;
            }
            return s;
        }
        lx_.fail("expected a statement");
    }

    StmtPtr parseSeqUntil(Ast& ast, const std::vector<std::string>& stops) {
        std::vector<StmtPtr> stmts;
        auto atStop = [&]() {
            const Token& t = lx_.peek();
            if (t.kind != Token::Kind::Ident) return false;
            for (const auto& s : stops)
                if (t.text == s) return true;
            return false;
        };
        while (!atStop()) {
            if (lx_.peek().kind == Token::Kind::End) lx_.fail("unexpected end of input");
            stmts.push_back(parseStmt(ast));
            skipSeparators();
        }
        if (stmts.empty()) lx_.fail("empty statement block");
        StmtPtr out;
        for (size_t i = stmts.size(); i > 0; --i) {
            StmtPtr cur = std::move(stmts[i - 1]);
            if (!out) out = std::move(cur);
            else {
                auto seq = std::make_unique<Stmt>();
                seq->kind = Stmt::Kind::Seq;
                seq->line = cur->line;
                seq->col = cur->col;
                seq->a = std::move(cur);
                seq->b = std::move(out);
                out = std::move(seq);
            }
        }
        return out;
    }

    void collectBodyVars(const Stmt* s, std::set<int>& used) {
        if (!s) return;
        if (s->var >= 0) used.insert(s->var);
        for (const auto& [v, c] : s->expr.coeffs) used.insert(v);
        for (const auto& d : s->guard.disjuncts)
            for (const auto& c : d)
                for (const auto& [v, q] : c.expr.coeffs) used.insert(v);
        collectBodyVars(s->a.get(), used);
        collectBodyVars(s->b.get(), used);
    }

    void checkInitialized(const Ast& ast) {
        std::set<int> defined;
        for (const auto& [v, q] : ast.preamble) defined.insert(v);
        std::set<int> used;
        collectBodyVars(ast.body.get(), used);
        for (int v : used)
            if (!defined.count(v)) throw UninitializedVariableError(ast.vars.name(v));
    }

    Lexer lx_;
};

void printStmt(std::ostream& os, const Stmt* s, const VarTable& vars, int indent);

void printIndent(std::ostream& os, int n) {
    for (int i = 0; i < n; ++i) os << "  ";
}

void printSeq(std::ostream& os, const Stmt* s, const VarTable& vars, int indent) {
    while (s && s->kind == Stmt::Kind::Seq) {
        printStmt(os, s->a.get(), vars, indent);
        s = s->b.get();
    }
    if (s) printStmt(os, s, vars, indent);
}

void printStmt(std::ostream& os, const Stmt* s, const VarTable& vars, int indent) {
    printIndent(os, indent);
    switch (s->kind) {
        case Stmt::Kind::Skip:
            os << "skip\n";
            return;
        case Stmt::Kind::AssignAffine:
            os << vars.name(s->var) << " := " << exprStr(s->expr, vars) << "\n";
            return;
        case Stmt::Kind::AssignSample:
            os << vars.name(s->var) << " := ";
            if (!s->expr.isZero()) os << exprStr(s->expr, vars) << " + ";
            os << "sample(" << s->distId << ")\n";
            return;
        case Stmt::Kind::AssignChoose:
            os << vars.name(s->var) << " := ndet(" << setSpecStr(s->dom) << ")\n";
            return;
        case Stmt::Kind::Seq:
            printSeq(os, s, vars, indent);
            return;
        case Stmt::Kind::IfGuard:
        case Stmt::Kind::IfProb:
        case Stmt::Kind::IfStar:
            os << "if ";
            if (s->kind == Stmt::Kind::IfGuard) os << plpStr(s->guard, vars);
            else if (s->kind == Stmt::Kind::IfProb) os << "prob(" << ratDecimalStr(s->prob) << ")";
            else os << "*";
            os << " then\n";
            printSeq(os, s->a.get(), vars, indent + 1);
            printIndent(os, indent);
            os << "else\n";
            printSeq(os, s->b.get(), vars, indent + 1);
            printIndent(os, indent);
            os << "fi\n";
            return;
        case Stmt::Kind::While:
            os << "while " << plpStr(s->guard, vars) << " do\n";
            printSeq(os, s->a.get(), vars, indent + 1);
            printIndent(os, indent);
            os << "od\n";
            return;
    }
}

} // namespace

Ast parseProgram(const std::string& source) {
    ProgramParser p(source);
    return p.parse();
}

bool stmtEquals(const Stmt* a, const Stmt* b) {
    if (!a || !b) return a == b;
    if (a->kind != b->kind) return false;
    if (a->var != b->var || !(a->expr == b->expr) || a->distId != b->distId) return false;
    if (!(a->dom == b->dom) || !(a->guard == b->guard) || a->prob != b->prob) return false;
    return stmtEquals(a->a.get(), b->a.get()) && stmtEquals(a->b.get(), b->b.get());
}

bool astEquals(const Ast& x, const Ast& y) {
    if (x.preamble != y.preamble) return false;
    if (x.vars.names() != y.vars.names()) return false;
    return stmtEquals(x.body.get(), y.body.get());
}

std::string prettyPrint(const Ast& ast) {
    std::ostringstream os;
    for (const auto& [v, q] : ast.preamble)
        os << ast.vars.name(v) << " := " << ratDecimalStr(q) << "\n";
    if (ast.body) printSeq(os, ast.body.get(), ast.vars, 0);
    return os.str();
}

} // namespace stochinv
