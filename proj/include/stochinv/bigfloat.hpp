#pragma once

#include "stochinv/rational.hpp"

#include <boost/multiprecision/mpfr.hpp>
#include <string>

namespace stochinv {

/// High-precision float for evaluating the exponential tail bounds; wide
/// exponent range so nothing underflows in the tested parameter boxes.
using BigFloat = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<100>>;

inline BigFloat toBigFloat(const Rat& q) {
    return BigFloat(numerator(q).str()) / BigFloat(denominator(q).str());
}

/// Exact rational value of a BigFloat (every finite binary float is
/// rational).
Rat ratFromBigFloat(const BigFloat& f);

/// Scientific notation with the given significant digits.
std::string sci(const BigFloat& f, int digits = 6);

} // namespace stochinv
