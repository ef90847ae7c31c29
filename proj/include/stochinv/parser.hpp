#pragma once

#include "stochinv/ast.hpp"

#include <string>
#include <vector>

namespace stochinv {

/// Token stream shared by the program parser and the pcfg/certificate file
/// readers. Maps the common unicode math glyphs to their ASCII forms.
struct Token {
    enum class Kind { Ident, Number, Punct, Newline, End };
    Kind kind = Kind::End;
    std::string text;  // identifier, or punctuation like ":=", "<="
    Rat number{0};
    int line = 0, col = 0;
};

class Lexer {
public:
    explicit Lexer(const std::string& source);
    const Token& peek(int ahead = 0);
    Token next();
    size_t mark() const { return pos_; }
    void reset(size_t p) { pos_ = p; }
    [[noreturn]] void fail(const std::string& msg);
    [[noreturn]] void failAt(const Token& t, const std::string& msg);

private:
    void lexAll(const std::string& source);
    std::vector<Token> toks_;
    size_t pos_ = 0;
};

/// Parses APP source text into an AST: an initialization preamble (leading
/// `var := constant` lines) followed by the program body. Decimal literals
/// become exact rationals. Throws SyntaxError / UninitializedVariableError.
Ast parseProgram(const std::string& source);

// Shared sub-parsers used by the pcfg and certificate readers. All of them
// read from the current lexer position.
AffineExpr parseAffine(Lexer& lx, VarTable& vars, bool allowNewVars);
Formula parsePredicate(Lexer& lx, VarTable& vars, bool allowNewVars);
SetSpec parseSetSpec(Lexer& lx);
Rat parseNumberToken(Lexer& lx);

std::string setSpecStr(const SetSpec& s);

} // namespace stochinv
