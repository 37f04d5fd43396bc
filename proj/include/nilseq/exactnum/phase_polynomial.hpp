#pragma once

#include "nilseq/error.hpp"
#include "nilseq/exactnum/integral_polynomial.hpp"
#include "nilseq/exactnum/phase_scalar.hpp"

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

namespace nilseq {

enum class Basis { monomial, binomial };

/// Polynomial with PhaseScalar coefficients, p(n) = sum_j c_j * b_j(n) where
/// b_j is n^j or C(n, j) depending on the recorded basis.
class PhasePolynomial {
public:
    PhasePolynomial() = default;
    PhasePolynomial(Basis basis, std::vector<PhaseScalar> coeffs) : basis_(basis), c_(std::move(coeffs)) { trim(); }

    static PhasePolynomial constant(PhaseScalar c) { return PhasePolynomial(Basis::binomial, {std::move(c)}); }

    /// Exact Newton interpolation through values p(0), ..., p(k); binomial basis.
    static PhasePolynomial from_values(std::vector<PhaseScalar> values)
    {
        std::vector<PhaseScalar> c;
        c.reserve(values.size());
        for (std::size_t j = 0; j < values.size(); ++j) {
            c.push_back(values[0]);
            for (std::size_t i = 0; i + 1 < values.size() - j; ++i)
                values[i] = values[i + 1] - values[i];
        }
        return PhasePolynomial(Basis::binomial, std::move(c));
    }

    /// sum_j coeff * p(n) for an integer-valued p.
    static PhasePolynomial from_integral(const IntegralPolynomial& p, const PhaseScalar& coeff)
    {
        std::vector<PhaseScalar> c;
        for (const auto& v : p.coeffs())
            c.push_back(coeff * v);
        return PhasePolynomial(Basis::binomial, std::move(c));
    }

    Basis basis() const noexcept { return basis_; }
    const std::vector<PhaseScalar>& coeffs() const noexcept { return c_; }
    PhaseScalar coeff(std::size_t j) const { return j < c_.size() ? c_[j] : PhaseScalar(); }
    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    bool is_constant() const noexcept { return c_.size() <= 1; }

    PhaseScalar eval(const BigInt& n) const
    {
        PhaseScalar r;
        if (basis_ == Basis::monomial) {
            BigInt pw = 1;
            for (std::size_t j = 0; j < c_.size(); ++j) {
                if (j > 0)
                    pw *= n;
                if (!c_[j].is_zero())
                    r += c_[j] * pw;
            }
        } else {
            BigInt b = 1;
            for (std::size_t j = 0; j < c_.size(); ++j) {
                if (j > 0)
                    b = b * (n - BigInt(j - 1)) / BigInt(j);
                if (!c_[j].is_zero())
                    r += c_[j] * b;
            }
        }
        return r;
    }

    PhaseScalar eval(long long n) const { return eval(BigInt(n)); }

    PhasePolynomial to_binomial() const
    {
        if (basis_ == Basis::binomial || c_.empty())
            return *this;
        // n^j = sum_i S(j, i) i! C(n, i), S = Stirling numbers of the second kind.
        const std::size_t k = c_.size();
        std::vector<std::vector<BigInt>> stirling(k, std::vector<BigInt>(k));
        stirling[0][0] = 1;
        for (std::size_t j = 1; j < k; ++j)
            for (std::size_t i = 1; i <= j; ++i)
                stirling[j][i] = BigInt(i) * stirling[j - 1][i] + stirling[j - 1][i - 1];
        std::vector<PhaseScalar> out(k);
        for (std::size_t j = 0; j < k; ++j) {
            if (c_[j].is_zero())
                continue;
            for (std::size_t i = 0; i <= j; ++i)
                if (stirling[j][i] != 0)
                    out[i] += c_[j] * (stirling[j][i] * factorial(static_cast<unsigned>(i)));
        }
        return PhasePolynomial(Basis::binomial, std::move(out));
    }

    PhasePolynomial operator+(const PhasePolynomial& o) const
    {
        PhasePolynomial a = to_binomial();
        PhasePolynomial b = o.to_binomial();
        std::vector<PhaseScalar> r(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t j = 0; j < r.size(); ++j)
            r[j] = a.coeff(j) + b.coeff(j);
        return PhasePolynomial(Basis::binomial, std::move(r));
    }

    PhasePolynomial operator-() const { return scaled(Rational(-1)); }
    PhasePolynomial operator-(const PhasePolynomial& o) const { return *this + (-o); }

    PhasePolynomial scaled(const Rational& k) const
    {
        std::vector<PhaseScalar> r = c_;
        for (auto& v : r)
            v *= k;
        return PhasePolynomial(basis_, std::move(r));
    }

    /// p(n) * q(n) for integer-valued q, via sampling.
    PhasePolynomial times(const IntegralPolynomial& q) const
    {
        if (c_.empty() || q.is_zero())
            return {};
        const std::size_t n = static_cast<std::size_t>(degree() + q.degree()) + 1;
        std::vector<PhaseScalar> v(n);
        for (std::size_t t = 0; t < n; ++t)
            v[t] = eval(BigInt(t)) * q.eval(BigInt(t));
        return from_values(std::move(v));
    }

    /// p(q(n)) for integer-valued q, via sampling.
    PhasePolynomial compose(const IntegralPolynomial& q) const
    {
        if (c_.empty())
            return {};
        const std::size_t n = static_cast<std::size_t>(degree() * std::max(q.degree(), 0)) + 1;
        std::vector<PhaseScalar> v(n);
        for (std::size_t t = 0; t < n; ++t)
            v[t] = eval(q.eval(BigInt(t)));
        return from_values(std::move(v));
    }

    /// Binomial-basis coefficients reduced mod 1. Because C(n, j) is an integer
    /// for every integer n, the reduced polynomial agrees with p mod 1 on Z.
    PhasePolynomial reduced_mod_1() const
    {
        PhasePolynomial b = to_binomial();
        for (auto& v : b.c_)
            v = v.reduce_mod_1();
        b.trim();
        return b;
    }

    /// True when every coefficient is rational.
    bool all_rational() const
    {
        for (const auto& v : c_)
            if (!v.is_rational())
                return false;
        return true;
    }

    /// True when some non-constant coefficient carries a generator. The answer
    /// does not depend on the basis.
    bool has_irrational_nonconstant() const
    {
        for (std::size_t j = 1; j < c_.size(); ++j)
            if (!c_[j].is_rational())
                return true;
        return false;
    }

    /// Equality as functions Z -> R/Z.
    bool equal_mod_1(const PhasePolynomial& o) const
    {
        PhasePolynomial d = (*this - o).reduced_mod_1();
        for (const auto& v : d.c_)
            if (!v.is_zero())
                return false;
        return true;
    }

    bool operator==(const PhasePolynomial& o) const
    {
        PhasePolynomial a = to_binomial();
        PhasePolynomial b = o.to_binomial();
        return a.c_ == b.c_;
    }

    std::string str(const char* var = "n") const
    {
        if (c_.empty())
            return "0";
        std::string s;
        for (std::size_t j = 0; j < c_.size(); ++j) {
            if (c_[j].is_zero())
                continue;
            if (!s.empty())
                s += " + ";
            std::string b;
            if (j == 0)
                b = "";
            else if (basis_ == Basis::binomial)
                b = "C(" + std::string(var) + "," + std::to_string(j) + ")";
            else
                b = std::string(var) + (j > 1 ? "^" + std::to_string(j) : "");
            s += "(" + c_[j].str() + ")" + (b.empty() ? "" : "*" + b);
        }
        return s.empty() ? "0" : s;
    }

private:
    void trim()
    {
        while (!c_.empty() && c_.back().is_zero())
            c_.pop_back();
    }

    Basis basis_ = Basis::binomial;
    std::vector<PhaseScalar> c_;
};

} // namespace nilseq
