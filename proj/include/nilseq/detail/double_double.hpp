#pragma once

#include <cmath>

namespace nilseq::detail {

/// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
struct DoubleDouble {
    double hi = 0.0;
    double lo = 0.0;

    double value() const noexcept { return hi + lo; }
};

inline DoubleDouble two_sum(double a, double b) noexcept
{
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline DoubleDouble quick_two_sum(double a, double b) noexcept
{
    double s = a + b;
    return {s, b - (s - a)};
}

inline DoubleDouble operator+(const DoubleDouble& a, const DoubleDouble& b) noexcept
{
    DoubleDouble s = two_sum(a.hi, b.hi);
    DoubleDouble t = two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline DoubleDouble operator-(const DoubleDouble& a) noexcept { return {-a.hi, -a.lo}; }
inline DoubleDouble operator-(const DoubleDouble& a, const DoubleDouble& b) noexcept { return a + (-b); }

/// Representative of x mod 1 in [0, 1).
inline DoubleDouble mod1(const DoubleDouble& x) noexcept
{
    DoubleDouble r = x - DoubleDouble{std::floor(x.hi), 0.0};
    double f = std::floor(r.hi);
    if (f != 0.0)
        r = r - DoubleDouble{f, 0.0};
    if (r.hi + r.lo < 0.0)
        r = r + DoubleDouble{1.0, 0.0};
    if (r.hi + r.lo >= 1.0)
        r = r - DoubleDouble{1.0, 0.0};
    return r;
}

} // namespace nilseq::detail
