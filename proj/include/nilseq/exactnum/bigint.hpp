#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>

namespace nilseq {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
/// 50 decimal digits (166 bits). Generator values and fractional parts of
/// large phases are carried at this precision.
using HighPrec = boost::multiprecision::cpp_bin_float_50;

inline BigInt floor_div(const BigInt& a, const BigInt& b)
{
    BigInt q = a / b;
    BigInt r = a - q * b;
    if (r != 0 && ((r < 0) != (b < 0)))
        --q;
    return q;
}

inline BigInt floor_mod(const BigInt& a, const BigInt& b) { return a - floor_div(a, b) * b; }

inline BigInt floor(const Rational& x)
{
    return floor_div(boost::multiprecision::numerator(x), boost::multiprecision::denominator(x));
}

/// x - floor(x), in [0, 1).
inline Rational frac(const Rational& x) { return x - Rational(floor(x)); }

/// Generalized binomial coefficient C(t, j) = t(t-1)...(t-j+1)/j!, valid for
/// every integer t (negative t included).
inline BigInt binomial(const BigInt& t, unsigned j)
{
    BigInt num = 1;
    BigInt den = 1;
    for (unsigned i = 0; i < j; ++i) {
        num *= (t - i);
        den *= (i + 1);
    }
    return num / den;
}

inline BigInt factorial(unsigned n)
{
    BigInt f = 1;
    for (unsigned i = 2; i <= n; ++i)
        f *= i;
    return f;
}

/// Checked conversion; nullopt when the value does not fit.
inline std::optional<std::int64_t> to_i64(const BigInt& x)
{
    if (x > std::numeric_limits<std::int64_t>::max() || x < std::numeric_limits<std::int64_t>::min())
        return std::nullopt;
    return static_cast<std::int64_t>(x);
}

inline HighPrec to_high(const Rational& x)
{
    return HighPrec(boost::multiprecision::numerator(x)) / HighPrec(boost::multiprecision::denominator(x));
}

/// Fractional part of a high-precision real, in [0, 1).
inline HighPrec frac(const HighPrec& x)
{
    HighPrec f = x - boost::multiprecision::floor(x);
    if (f >= 1)
        f -= 1;
    return f;
}

inline std::string to_string(const Rational& x)
{
    if (boost::multiprecision::denominator(x) == 1)
        return boost::multiprecision::numerator(x).str();
    return boost::multiprecision::numerator(x).str() + "/" + boost::multiprecision::denominator(x).str();
}

inline BigInt lcm(const BigInt& a, const BigInt& b)
{
    if (a == 0 || b == 0)
        return 0;
    BigInt g = boost::multiprecision::gcd(a, b);
    BigInt l = a / g * b;
    return l < 0 ? BigInt(-l) : l;
}

} // namespace nilseq
