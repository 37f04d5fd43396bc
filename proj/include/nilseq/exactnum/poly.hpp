#pragma once

#include "nilseq/error.hpp"
#include "nilseq/exactnum/bigint.hpp"

#include <algorithm>
#include <cstddef>
#include <type_traits>
#include <initializer_list>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace nilseq {

/// Dense univariate polynomial in the monomial basis, coefficients stored
/// lowest degree first. T is BigInt or Rational.
template <typename T>
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }
    Poly(std::initializer_list<long long> coeffs)
    {
        for (long long v : coeffs)
            c_.emplace_back(v);
        trim();
    }

    static Poly monomial(std::size_t degree, T coeff = T(1))
    {
        std::vector<T> c(degree + 1);
        c[degree] = std::move(coeff);
        return Poly(std::move(c));
    }

    bool is_zero() const noexcept { return c_.empty(); }
    /// -1 for the zero polynomial.
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    const std::vector<T>& coeffs() const noexcept { return c_; }
    T coeff(std::size_t i) const { return i < c_.size() ? c_[i] : T(0); }
    const T& leading() const { return c_.back(); }

    bool operator==(const Poly&) const = default;

    template <typename X>
    X eval(const X& x) const
    {
        X r = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it)
            r = r * x + X(*it);
        return r;
    }

    Poly operator+(const Poly& o) const
    {
        std::vector<T> r(std::max(c_.size(), o.c_.size()));
        for (std::size_t i = 0; i < r.size(); ++i)
            r[i] = coeff(i) + o.coeff(i);
        return Poly(std::move(r));
    }

    Poly operator-(const Poly& o) const
    {
        std::vector<T> r(std::max(c_.size(), o.c_.size()));
        for (std::size_t i = 0; i < r.size(); ++i)
            r[i] = coeff(i) - o.coeff(i);
        return Poly(std::move(r));
    }

    Poly operator*(const Poly& o) const
    {
        if (is_zero() || o.is_zero())
            return Poly();
        std::vector<T> r(c_.size() + o.c_.size() - 1);
        for (std::size_t i = 0; i < c_.size(); ++i)
            for (std::size_t j = 0; j < o.c_.size(); ++j)
                r[i + j] += c_[i] * o.c_[j];
        return Poly(std::move(r));
    }

    Poly derivative() const
    {
        if (c_.size() <= 1)
            return Poly();
        std::vector<T> r(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i)
            r[i - 1] = c_[i] * T(static_cast<long long>(i));
        return Poly(std::move(r));
    }

    /// Quotient and remainder. Over BigInt the divisor must be monic (or
    /// otherwise divide every intermediate leading coefficient exactly).
    std::pair<Poly, Poly> divmod(const Poly& d) const
    {
        if (d.is_zero())
            throw error(errc::invalid_argument, "polynomial division by zero");
        std::vector<T> rem = c_;
        if (c_.size() < d.c_.size())
            return {Poly(), *this};
        std::vector<T> q(c_.size() - d.c_.size() + 1);
        for (std::size_t k = q.size(); k-- > 0;) {
            const T& top = rem[k + d.c_.size() - 1];
            if (top == 0)
                continue;
            T f;
            if constexpr (std::is_same_v<T, BigInt>) {
                if (top % d.leading() != 0)
                    throw error(errc::invalid_argument, "inexact integer polynomial division");
                f = top / d.leading();
            } else {
                f = top / d.leading();
            }
            q[k] = f;
            for (std::size_t j = 0; j < d.c_.size(); ++j)
                rem[k + j] -= f * d.c_[j];
        }
        return {Poly(std::move(q)), Poly(std::move(rem))};
    }

    Poly monic() const
    {
        if (is_zero())
            return *this;
        std::vector<T> r = c_;
        T lead = leading();
        for (auto& v : r)
            v /= lead;
        return Poly(std::move(r));
    }

    std::string str(const char* var = "x") const
    {
        if (is_zero())
            return "0";
        std::ostringstream os;
        bool first = true;
        for (std::size_t i = c_.size(); i-- > 0;) {
            if (c_[i] == 0)
                continue;
            T a = c_[i];
            bool neg = a < 0;
            if (neg)
                a = -a;
            if (first)
                os << (neg ? "-" : "");
            else
                os << (neg ? " - " : " + ");
            first = false;
            if (i == 0 || a != 1)
                os << a;
            if (i > 0)
                os << var;
            if (i > 1)
                os << '^' << i;
        }
        return os.str();
    }

private:
    void trim()
    {
        while (!c_.empty() && c_.back() == 0)
            c_.pop_back();
    }

    std::vector<T> c_;
};

using IntPoly = Poly<BigInt>;
using RatPoly = Poly<Rational>;

inline RatPoly to_rational(const IntPoly& p)
{
    std::vector<Rational> c;
    for (const auto& v : p.coeffs())
        c.emplace_back(v);
    return RatPoly(std::move(c));
}

/// Monic gcd over Q.
inline RatPoly gcd(RatPoly a, RatPoly b)
{
    while (!b.is_zero()) {
        RatPoly r = a.divmod(b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

/// Yun's square-free decomposition of a monic polynomial over Q:
/// returns factors a_1, a_2, ... with p = prod a_i^i (a_i may be 1).
inline std::vector<RatPoly> squarefree_decomposition(const RatPoly& p)
{
    std::vector<RatPoly> out;
    RatPoly f = p.monic();
    if (f.degree() <= 0)
        return out;
    RatPoly fp = f.derivative();
    RatPoly a = gcd(f, fp);
    RatPoly b = f.divmod(a).first;
    RatPoly c = fp.divmod(a).first;
    RatPoly d = c - b.derivative();
    while (b.degree() > 0) {
        RatPoly g = gcd(b, d);
        out.push_back(g);
        b = b.divmod(g).first;
        c = d.divmod(g).first;
        d = c - b.derivative();
    }
    return out;
}

} // namespace nilseq
