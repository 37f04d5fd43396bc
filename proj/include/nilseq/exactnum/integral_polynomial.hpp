#pragma once

#include "nilseq/exactnum/bigint.hpp"
#include "nilseq/exactnum/poly.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nilseq {

/// Integer-valued polynomial in the binomial basis:
///   p(t) = sum_j c_j * C(t, j),  c_j integers.
/// Every such p maps Z to Z, and every integer-valued polynomial has exactly
/// one representation of this form.
class IntegralPolynomial {
public:
    IntegralPolynomial() = default;
    explicit IntegralPolynomial(std::vector<BigInt> binomial_coeffs) : c_(std::move(binomial_coeffs)) { trim(); }
    IntegralPolynomial(std::initializer_list<long long> binomial_coeffs)
    {
        for (long long v : binomial_coeffs)
            c_.emplace_back(v);
        trim();
    }

    static IntegralPolynomial constant(const BigInt& c) { return IntegralPolynomial(std::vector<BigInt>{c}); }
    /// p(t) = t
    static IntegralPolynomial identity() { return IntegralPolynomial({0, 1}); }

    /// Newton forward differences of values p(0), p(1), ..., p(n).
    static IntegralPolynomial from_values(std::vector<BigInt> values)
    {
        std::vector<BigInt> c;
        c.reserve(values.size());
        for (std::size_t j = 0; j < values.size(); ++j) {
            c.push_back(values[0]);
            for (std::size_t i = 0; i + 1 < values.size() - j; ++i)
                values[i] = values[i + 1] - values[i];
        }
        return IntegralPolynomial(std::move(c));
    }

    const std::vector<BigInt>& coeffs() const noexcept { return c_; }
    BigInt coeff(std::size_t j) const { return j < c_.size() ? c_[j] : BigInt(0); }
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const noexcept { return c_.empty(); }
    bool is_constant() const noexcept { return c_.size() <= 1; }

    bool operator==(const IntegralPolynomial&) const = default;

    BigInt eval(const BigInt& t) const
    {
        BigInt r = 0;
        BigInt b = 1; // C(t, j), updated incrementally
        for (std::size_t j = 0; j < c_.size(); ++j) {
            if (j > 0)
                b = b * (t - BigInt(j - 1)) / BigInt(j);
            r += c_[j] * b;
        }
        return r;
    }

    /// Fast path for evaluation at machine integers; nullopt when the value
    /// does not fit in int64.
    std::optional<std::int64_t> eval_i64(std::int64_t t) const
    {
        __int128 r = 0;
        __int128 b = 1;
        for (std::size_t j = 0; j < c_.size(); ++j) {
            if (j > 0) {
                __int128 nb;
                if (__builtin_mul_overflow(b, static_cast<__int128>(t) - static_cast<__int128>(j - 1), &nb))
                    return to_i64(eval(BigInt(t)));
                b = nb / static_cast<__int128>(j);
            }
            auto cj = to_i64(c_[j]);
            __int128 term;
            if (!cj || __builtin_mul_overflow(static_cast<__int128>(*cj), b, &term) || __builtin_add_overflow(r, term, &r))
                return to_i64(eval(BigInt(t)));
        }
        if (r > std::numeric_limits<std::int64_t>::max() || r < std::numeric_limits<std::int64_t>::min())
            return std::nullopt;
        return static_cast<std::int64_t>(r);
    }

    IntegralPolynomial operator+(const IntegralPolynomial& o) const
    {
        std::vector<BigInt> r(std::max(c_.size(), o.c_.size()));
        for (std::size_t j = 0; j < r.size(); ++j)
            r[j] = coeff(j) + o.coeff(j);
        return IntegralPolynomial(std::move(r));
    }

    IntegralPolynomial operator-(const IntegralPolynomial& o) const
    {
        std::vector<BigInt> r(std::max(c_.size(), o.c_.size()));
        for (std::size_t j = 0; j < r.size(); ++j)
            r[j] = coeff(j) - o.coeff(j);
        return IntegralPolynomial(std::move(r));
    }

    IntegralPolynomial operator-() const { return scaled(-1); }

    IntegralPolynomial scaled(const BigInt& k) const
    {
        std::vector<BigInt> r = c_;
        for (auto& v : r)
            v *= k;
        return IntegralPolynomial(std::move(r));
    }

    /// Product, computed by sampling at 0..deg and re-differencing.
    IntegralPolynomial operator*(const IntegralPolynomial& o) const
    {
        if (is_zero() || o.is_zero())
            return {};
        const std::size_t n = static_cast<std::size_t>(degree() + o.degree()) + 1;
        std::vector<BigInt> v(n);
        for (std::size_t t = 0; t < n; ++t)
            v[t] = eval(BigInt(t)) * o.eval(BigInt(t));
        return from_values(std::move(v));
    }

    /// p(t + s)
    IntegralPolynomial shifted(const BigInt& s) const
    {
        if (is_constant())
            return *this;
        const std::size_t n = c_.size();
        std::vector<BigInt> v(n);
        for (std::size_t t = 0; t < n; ++t)
            v[t] = eval(BigInt(t) + s);
        return from_values(std::move(v));
    }

    /// Monomial-basis coefficients (rational in general), for display.
    RatPoly to_monomial() const
    {
        RatPoly r;
        RatPoly b({Rational(1)}); // C(t, j) in monomial form
        for (std::size_t j = 0; j < c_.size(); ++j) {
            if (j > 0)
                b = b * RatPoly({Rational(-static_cast<long long>(j - 1)) / Rational(static_cast<long long>(j)),
                                 Rational(1) / Rational(static_cast<long long>(j))});
            r = r + b * RatPoly({Rational(c_[j])});
        }
        return r;
    }

    std::string str(const char* var = "t") const
    {
        if (is_zero())
            return "0";
        std::string s;
        for (std::size_t j = 0; j < c_.size(); ++j) {
            if (c_[j] == 0)
                continue;
            if (!s.empty())
                s += " + ";
            s += c_[j].str();
            if (j > 0)
                s += "*C(" + std::string(var) + "," + std::to_string(j) + ")";
        }
        return s;
    }

private:
    void trim()
    {
        while (!c_.empty() && c_.back() == 0)
            c_.pop_back();
    }

    std::vector<BigInt> c_;
};

} // namespace nilseq
