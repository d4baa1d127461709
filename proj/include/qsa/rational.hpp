#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <string>

#include "qsa/error.hpp"

namespace qsa {

// All set-level questions (polarity, supports, domination) are exact, so the
// whole toolkit runs on arbitrary-precision rationals. GMP keeps them
// canonical: denominator > 0, gcd(num, den) = 1.
using Rat = boost::multiprecision::mpq_rational;
using Int = boost::multiprecision::mpz_int;

inline Rat rat(long num, long den = 1) { return Rat(num, den); }

/// Parses "p/q" or a plain integer "p". Throws Error("BadRational") on
/// malformed input or q = 0.
inline Rat parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(text));
        Int num(text.substr(0, slash));
        Int den(text.substr(slash + 1));
        if (den == 0) fail("BadRational", "zero denominator in \"" + text + "\"");
        return Rat(num, den);
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        fail("BadRational", "cannot parse \"" + text + "\"");
    }
}

/// Canonical form: "p" when the value is an integer, "p/q" otherwise.
inline std::string format_rational(const Rat& value) {
    std::string out = numerator(value).str();
    if (denominator(value) != 1) out += "/" + denominator(value).str();
    return out;
}

} // namespace qsa
