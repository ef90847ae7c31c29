#pragma once

#include <stdexcept>
#include <string>

namespace stochinv {

/// Base for all library errors. `exitCode` is the process exit status the
/// command line tool maps the error to (2 = malformed input, 3 = no
/// result/unknown, 4 = internal limit).
struct Error : std::runtime_error {
    int exitCode;
    explicit Error(const std::string& msg, int code = 2) : std::runtime_error(msg), exitCode(code) {}
};

struct SyntaxError : Error {
    int line, col;
    SyntaxError(int line_, int col_, const std::string& msg)
        : Error("syntax error at " + std::to_string(line_) + ":" + std::to_string(col_) + ": " + msg),
          line(line_), col(col_) {}
};

struct UninitializedVariableError : Error {
    std::string name;
    explicit UninitializedVariableError(const std::string& n)
        : Error("variable '" + n + "' used in the body but not assigned in the preamble"), name(n) {}
};

struct FormatError : Error {
    explicit FormatError(const std::string& msg) : Error(msg) {}
};

struct DanglingLocationError : FormatError {
    explicit DanglingLocationError(const std::string& msg) : FormatError(msg) {}
};

struct ProbSumNotOneError : FormatError {
    explicit ProbSumNotOneError(const std::string& msg) : FormatError(msg) {}
};

struct UnknownDistributionError : Error {
    explicit UnknownDistributionError(const std::string& msg) : Error(msg) {}
};

struct InvalidParametersError : Error {
    explicit InvalidParametersError(const std::string& msg) : Error(msg) {}
};

struct NotPolyhedralError : Error {
    explicit NotPolyhedralError(const std::string& msg) : Error(msg) {}
};

/// DNF disjunct count exceeded the configured cap.
struct BlowupLimitError : Error {
    explicit BlowupLimitError(const std::string& msg) : Error(msg, 4) {}
};

/// Linear program exceeded the configured size cap.
struct SizeLimitError : Error {
    explicit SizeLimitError(const std::string& msg) : Error(msg, 4) {}
};

struct PreconditionError : Error {
    explicit PreconditionError(const std::string& msg) : Error(msg) {}
};

struct InvalidCertificateError : Error {
    explicit InvalidCertificateError(const std::string& msg) : Error(msg, 3) {}
};

struct EntailmentError : Error {
    explicit EntailmentError(const std::string& msg) : Error(msg, 3) {}
};

struct DMismatchError : Error {
    explicit DMismatchError(const std::string& msg) : Error(msg) {}
};

struct GuardGapError : Error {
    explicit GuardGapError(const std::string& msg) : Error(msg, 3) {}
};

struct UnboundedChooseError : Error {
    explicit UnboundedChooseError(const std::string& msg) : Error(msg) {}
};

} // namespace stochinv
