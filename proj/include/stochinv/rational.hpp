#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <optional>
#include <string>

namespace stochinv {

using Rat = boost::multiprecision::mpq_rational;
using Int = boost::multiprecision::mpz_int;

/// Ceiling of a rational as an integer.
inline Int ratCeil(const Rat& q) {
    Int n = numerator(q), d = denominator(q);
    Int quo = n / d;                    // truncates toward zero
    if (quo * d != n && n > 0) quo += 1;
    return quo;
}

inline Rat ratAbs(const Rat& q) { return q < 0 ? Rat(-q) : q; }

/// Parses "7", "-3/4", "0.75", "1e-5", "5.1e-5" into an exact rational.
std::optional<Rat> parseRat(const std::string& text);

/// Prints a rational as "p/q" (or "p" when integral).
std::string ratStr(const Rat& q);

/// Prints a rational as an exact decimal when the denominator is of the
/// form 2^a 5^b, otherwise falls back to "p/q".
std::string ratDecimalStr(const Rat& q);

} // namespace stochinv
