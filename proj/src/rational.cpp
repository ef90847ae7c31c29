#include "stochinv/rational.hpp"

#include <cctype>
#include <sstream>

namespace stochinv {

std::optional<Rat> parseRat(const std::string& text) {
    if (text.empty()) return std::nullopt;
    size_t i = 0;
    bool neg = false;
    if (text[i] == '+' || text[i] == '-') {
        neg = text[i] == '-';
        ++i;
    }
    std::string intPart, fracPart, expPart;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) intPart += text[i++];
    if (i < text.size() && text[i] == '.') {
        ++i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) fracPart += text[i++];
    }
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        ++i;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) expPart += text[i++];
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) expPart += text[i++];
        if (expPart.empty() || expPart == "+" || expPart == "-") return std::nullopt;
    }
    if (i < text.size() && text[i] == '/') {
        // plain fraction p/q; no decimal point or exponent allowed
        if (!fracPart.empty() || !expPart.empty() || intPart.empty()) return std::nullopt;
        std::string den = text.substr(i + 1);
        if (den.empty()) return std::nullopt;
        for (char ch : den)
            if (!std::isdigit(static_cast<unsigned char>(ch))) return std::nullopt;
        Int n(intPart), d(den);
        if (d == 0) return std::nullopt;
        Rat r(n, d);
        return neg ? Rat(-r) : r;
    }
    if (i != text.size()) return std::nullopt;
    if (intPart.empty() && fracPart.empty()) return std::nullopt;

    Int num(intPart.empty() ? "0" : intPart);
    Int den(1);
    for (char ch : fracPart) {
        num = num * 10 + (ch - '0');
        den *= 10;
    }
    Rat r(num, den);
    if (!expPart.empty()) {
        long e = std::stol(expPart);
        Int p10 = 1;
        for (long k = 0; k < (e < 0 ? -e : e); ++k) p10 *= 10;
        if (e >= 0) r *= Rat(p10);
        else r /= Rat(p10);
    }
    return neg ? Rat(-r) : r;
}

std::string ratStr(const Rat& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

std::string ratDecimalStr(const Rat& q) {
    Int d = denominator(q);
    int twos = 0, fives = 0;
    Int rest = d;
    while (rest % 2 == 0) { rest /= 2; ++twos; }
    while (rest % 5 == 0) { rest /= 5; ++fives; }
    if (rest != 1) return ratStr(q);
    int shift = twos > fives ? twos : fives;
    Int scale = 1;
    for (int i = 0; i < shift; ++i) scale *= 10;
    Rat scaled = q * Rat(scale);
    Int n = numerator(scaled);  // scaled is integral now
    bool neg = n < 0;
    if (neg) n = -n;
    std::string digits = n.str();
    std::string out;
    if (shift == 0) {
        out = digits;
    } else {
        while (digits.size() <= static_cast<size_t>(shift)) digits.insert(digits.begin(), '0');
        out = digits.substr(0, digits.size() - shift) + "." + digits.substr(digits.size() - shift);
        while (out.back() == '0') out.pop_back();
        if (out.back() == '.') out.pop_back();
    }
    return neg ? "-" + out : out;
}

} // namespace stochinv
