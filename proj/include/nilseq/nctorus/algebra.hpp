#pragma once

#include "nilseq/error.hpp"
#include "nilseq/exactnum/entropy.hpp"
#include "nilseq/exactnum/int_matrix.hpp"
#include "nilseq/exactnum/integral_polynomial.hpp"
#include "nilseq/exactnum/phase_polynomial.hpp"
#include "nilseq/exactnum/phase_scalar.hpp"

#include <complex>
#include <map>
#include <string>
#include <vector>

namespace nilseq {

/// Skew-symmetric d x d matrix of phases; u_j u_k = e(theta_jk) u_k u_j.
class ThetaMatrix {
public:
    ThetaMatrix() = default;
    explicit ThetaMatrix(std::size_t d) : d_(d), a_(d * d) {}

    /// Full matrix; must be exactly skew-symmetric.
    explicit ThetaMatrix(const std::vector<std::vector<PhaseScalar>>& rows) : ThetaMatrix(rows.size())
    {
        for (std::size_t i = 0; i < d_; ++i) {
            if (rows[i].size() != d_)
                throw error(errc::dimension_mismatch, "theta must be square");
            for (std::size_t j = 0; j < d_; ++j)
                a_[i * d_ + j] = rows[i][j];
        }
        for (std::size_t i = 0; i < d_; ++i)
            for (std::size_t j = 0; j <= i; ++j)
                if (!((*this)(i, j) == -(*this)(j, i)))
                    throw error(errc::invalid_argument, "theta is not skew-symmetric at (" + std::to_string(i + 1) + "," +
                                                            std::to_string(j + 1) + ")");
    }

    static ThetaMatrix two(const PhaseScalar& theta12)
    {
        ThetaMatrix t(2);
        t.set(0, 1, theta12);
        return t;
    }

    /// Sets theta_ij and theta_ji = -theta_ij.
    void set(std::size_t i, std::size_t j, const PhaseScalar& v)
    {
        if (i == j) {
            if (!v.is_zero())
                throw error(errc::invalid_argument, "theta must have zero diagonal");
            return;
        }
        a_[i * d_ + j] = v;
        a_[j * d_ + i] = -v;
    }

    std::size_t dim() const noexcept { return d_; }
    const PhaseScalar& operator()(std::size_t i, std::size_t j) const { return a_[i * d_ + j]; }

    /// x^T Theta y.
    PhaseScalar form(const std::vector<BigInt>& x, const std::vector<BigInt>& y) const
    {
        PhaseScalar s;
        for (std::size_t i = 0; i < d_; ++i)
            for (std::size_t j = 0; j < d_; ++j)
                if (x[i] != 0 && y[j] != 0 && !(*this)(i, j).is_zero())
                    s += (*this)(i, j) * BigInt(x[i] * y[j]);
        return s;
    }

    /// beta(x, y) = sum_{k<j} x_j y_k theta_jk, the phase of u^x u^y in normal order.
    PhaseScalar beta(const std::vector<BigInt>& x, const std::vector<BigInt>& y) const
    {
        PhaseScalar s;
        for (std::size_t k = 0; k < d_; ++k)
            for (std::size_t j = k + 1; j < d_; ++j)
                if (x[j] != 0 && y[k] != 0 && !(*this)(j, k).is_zero())
                    s += (*this)(j, k) * BigInt(x[j] * y[k]);
        return s;
    }

    std::string str() const
    {
        std::string s = "[";
        for (std::size_t i = 0; i < d_; ++i) {
            s += i ? ", [" : "[";
            for (std::size_t j = 0; j < d_; ++j)
                s += (j ? ", " : "") + (*this)(i, j).str();
            s += "]";
        }
        return s + "]";
    }

private:
    std::size_t d_ = 0;
    std::vector<PhaseScalar> a_;
};

/// e(phase) u_1^x_1 ... u_d^x_d.
struct WeylWord {
    PhaseScalar phase;
    std::vector<BigInt> x;

    static WeylWord identity(std::size_t d) { return {PhaseScalar(), std::vector<BigInt>(d)}; }
    static WeylWord generator(std::size_t d, std::size_t j, long long power = 1)
    {
        WeylWord w = identity(d);
        w.x[j] = power;
        return w;
    }
    static WeylWord monomial(std::vector<BigInt> x, PhaseScalar phase = {}) { return {phase.reduce_mod_1(), std::move(x)}; }

    std::size_t dim() const noexcept { return x.size(); }
    bool operator==(const WeylWord& o) const { return x == o.x && equal_mod_1(phase, o.phase); }

    std::string str() const
    {
        std::string s = "e(" + phase.str() + ")";
        for (std::size_t j = 0; j < x.size(); ++j)
            if (x[j] != 0)
                s += " u" + std::to_string(j + 1) + (x[j] == 1 ? std::string() : "^" + x[j].str());
        return s;
    }
};

namespace detail {

inline void require_word_dim(const WeylWord& w, std::size_t d)
{
    if (w.dim() != d)
        throw error(errc::dimension_mismatch, "word has " + std::to_string(w.dim()) + " exponents, theta is " + std::to_string(d) + "x" +
                                                  std::to_string(d));
}

} // namespace detail

inline WeylWord word_mul(const WeylWord& a, const WeylWord& b, const ThetaMatrix& theta)
{
    detail::require_word_dim(a, theta.dim());
    detail::require_word_dim(b, theta.dim());
    WeylWord r;
    r.phase = (a.phase + b.phase + theta.beta(a.x, b.x)).reduce_mod_1();
    r.x.resize(a.dim());
    for (std::size_t j = 0; j < a.dim(); ++j)
        r.x[j] = a.x[j] + b.x[j];
    return r;
}

/// w^k for any integer k: e(k c + C(k, 2) beta(x, x)) u^(k x).
inline WeylWord word_pow(const WeylWord& w, long long k, const ThetaMatrix& theta)
{
    detail::require_word_dim(w, theta.dim());
    WeylWord r;
    r.phase = (w.phase * k + theta.beta(w.x, w.x) * binomial(BigInt(k), 2)).reduce_mod_1();
    for (const auto& v : w.x)
        r.x.push_back(v * k);
    return r;
}

inline WeylWord word_inverse(const WeylWord& w, const ThetaMatrix& theta) { return word_pow(w, -1, theta); }

/// The automorphism u_j -> u_1^s_1j ... u_d^s_dj of A_Theta.
class NcAutomorphism {
public:
    NcAutomorphism(IntMatrix s, ThetaMatrix theta) : s_(std::move(s)), theta_(std::move(theta))
    {
        s_.require_gl();
        const std::size_t d = theta_.dim();
        if (s_.dim() != d)
            throw error(errc::dimension_mismatch, "S is " + std::to_string(s_.dim()) + "x" + std::to_string(s_.dim()) + ", theta is " +
                                                      std::to_string(d) + "x" + std::to_string(d));
        cols_.resize(d);
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t i = 0; i < d; ++i)
                cols_[j].push_back(s_(i, j));
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < d; ++b) {
                PhaseScalar lhs = theta_.form(cols_[a], cols_[b]);
                if (!equal_mod_1(lhs, theta_(a, b)))
                    throw error(errc::not_compatible, "(S^T Theta S - Theta)_" + std::to_string(a + 1) + std::to_string(b + 1) + " = " +
                                                          (lhs - theta_(a, b)).str() + " is not an integer");
            }
        b_.resize(d * d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                b_[i * d + j] = theta_.beta(cols_[i], cols_[j]);
        inv_ = s_.inverse();
    }

    const IntMatrix& matrix() const noexcept { return s_; }
    const ThetaMatrix& theta() const noexcept { return theta_; }
    std::size_t dim() const noexcept { return theta_.dim(); }

    /// Phase of alpha(u^x) = prod_j alpha(u_j)^x_j:
    ///   sum_j C(x_j, 2) beta(s_j, s_j) + sum_{i<j} x_i x_j beta(s_i, s_j).
    PhaseScalar image_phase(const std::vector<BigInt>& x) const
    {
        const std::size_t d = dim();
        PhaseScalar p;
        for (std::size_t i = 0; i < d; ++i) {
            if (x[i] == 0)
                continue;
            p += b_[i * d + i] * binomial(x[i], 2);
            for (std::size_t j = i + 1; j < d; ++j)
                if (x[j] != 0)
                    p += b_[i * d + j] * BigInt(x[i] * x[j]);
        }
        return p;
    }

    WeylWord apply(const WeylWord& w) const
    {
        detail::require_word_dim(w, dim());
        return {(w.phase + image_phase(w.x)).reduce_mod_1(), s_.apply(w.x)};
    }

    WeylWord apply_inverse(const WeylWord& w) const
    {
        detail::require_word_dim(w, dim());
        std::vector<BigInt> y = inv_.apply(w.x);
        return {(w.phase - image_phase(y)).reduce_mod_1(), std::move(y)};
    }

    /// alpha^n(w) by repeated application, any integer n.
    WeylWord iterate(WeylWord w, long long n) const
    {
        for (long long i = 0; i < n; ++i)
            w = apply(w);
        for (long long i = 0; i > n; --i)
            w = apply_inverse(w);
        return w;
    }

private:
    IntMatrix s_;
    ThetaMatrix theta_;
    std::vector<std::vector<BigInt>> cols_;
    std::vector<PhaseScalar> b_;
    IntMatrix inv_;
};

inline WeylWord apply_auto(const IntMatrix& s, const WeylWord& w, const ThetaMatrix& theta) { return NcAutomorphism(s, theta).apply(w); }

struct ResidueForm {
    std::vector<IntegralPolynomial> exponents; // p_1r .. p_dr
    PhasePolynomial phase;                     // p_0r, binomial basis, reduced mod 1
};

/// alpha^(tm + r)(e(c) u^rho) = e(p_0r(t)) u^(p_1r(t), ..., p_dr(t)).
struct PhasePolyReport {
    unsigned m = 1;
    WeylWord start;
    std::vector<ResidueForm> residues;

    WeylWord at(long long n) const
    {
        const long long mm = m;
        const long long r = ((n % mm) + mm) % mm;
        const BigInt t = (BigInt(n) - r) / mm;
        const ResidueForm& f = residues[static_cast<std::size_t>(r)];
        WeylWord w;
        w.phase = f.phase.eval(t).reduce_mod_1();
        for (const auto& p : f.exponents)
            w.x.push_back(p.eval(t));
        return w;
    }

    /// Every exponent polynomial of residue r is constant in t.
    bool constant_exponents(std::size_t r) const
    {
        for (const auto& p : residues[r].exponents)
            if (!p.is_constant())
                return false;
        return true;
    }
};

/// Degree bound for p_0r used by the fitter.
inline unsigned phase_degree_bound(std::size_t d) { return static_cast<unsigned>(2 * d - 1); }

/// Exponents from the unipotent power polynomials; p_0r interpolated from
/// 2d exact word iterates per residue and checked on 3 more.
inline PhasePolyReport iterate_phase_polys(const NcAutomorphism& alpha, const WeylWord& start, unsigned m)
{
    detail::require_word_dim(start, alpha.dim());
    const std::size_t d = alpha.dim();
    const unsigned fit = phase_degree_bound(d) + 1;
    const unsigned total = fit + 3;
    auto polys = unipotent_power_polys(alpha.matrix(), m);

    std::vector<WeylWord> orbit;
    orbit.reserve(static_cast<std::size_t>(total) * m);
    WeylWord w = start;
    for (std::size_t n = 0; n < static_cast<std::size_t>(total) * m; ++n) {
        orbit.push_back(w);
        w = alpha.apply(w);
    }

    PhasePolyReport rep;
    rep.m = m;
    rep.start = start;
    for (unsigned r = 0; r < m; ++r) {
        ResidueForm f;
        f.exponents = polys[r].apply(start.x);
        std::vector<PhaseScalar> values;
        for (unsigned t = 0; t < fit; ++t)
            values.push_back(orbit[t * m + r].phase);
        f.phase = PhasePolynomial::from_values(std::move(values)).reduced_mod_1();
        for (unsigned t = 0; t < total; ++t) {
            const WeylWord& direct = orbit[t * m + r];
            if (!equal_mod_1(f.phase.eval(BigInt(t)), direct.phase))
                throw error(errc::degree_bound_exceeded, "phase polynomial of residue " + std::to_string(r) + " exceeds degree " +
                                                             std::to_string(fit - 1) + " (mismatch at t = " + std::to_string(t) + ")");
            for (std::size_t i = 0; i < d; ++i)
                if (f.exponents[i].eval(BigInt(t)) != direct.x[i])
                    throw error(errc::mismatch_at, "exponent polynomial disagrees with S^n x at n = " + std::to_string(t * m + r));
        }
        rep.residues.push_back(std::move(f));
    }
    return rep;
}

inline PhasePolyReport iterate_phase_polys(const IntMatrix& s, const ThetaMatrix& theta, const std::vector<BigInt>& rho, unsigned m)
{
    return iterate_phase_polys(NcAutomorphism(s, theta), WeylWord::monomial(rho), m);
}

/// Finite combination sum_x a_x u^x.
class WeylElement {
public:
    using Coeffs = std::map<std::vector<BigInt>, std::complex<double>>;

    WeylElement() = default;
    explicit WeylElement(std::size_t d) : d_(d) {}
    WeylElement(const WeylWord& w, std::complex<double> c = 1.0) : d_(w.dim()) { add(w, c); }

    std::size_t dim() const noexcept { return d_; }
    const Coeffs& coeffs() const noexcept { return c_; }

    /// Adds c e(w.phase) u^(w.x).
    void add(const WeylWord& w, std::complex<double> c = 1.0)
    {
        if (w.dim() != d_)
            throw error(errc::dimension_mismatch, "word dimension differs from element dimension");
        auto& slot = c_[w.x];
        slot += c * e(w.phase);
        if (slot == std::complex<double>(0.0))
            c_.erase(w.x);
    }

    std::complex<double> tau() const
    {
        auto it = c_.find(std::vector<BigInt>(d_));
        return it == c_.end() ? std::complex<double>(0.0) : it->second;
    }

    friend WeylElement operator+(const WeylElement& a, const WeylElement& b)
    {
        WeylElement r = a;
        for (const auto& [x, c] : b.c_)
            r.add(WeylWord::monomial(x), c);
        return r;
    }

    WeylElement scaled(std::complex<double> k) const
    {
        WeylElement r(d_);
        for (const auto& [x, c] : c_)
            r.add(WeylWord::monomial(x), k * c);
        return r;
    }

private:
    std::size_t d_ = 0;
    Coeffs c_;
};

inline WeylElement element_mul(const WeylElement& a, const WeylElement& b, const ThetaMatrix& theta)
{
    WeylElement r(theta.dim());
    for (const auto& [x, ca] : a.coeffs())
        for (const auto& [y, cb] : b.coeffs())
            r.add(word_mul(WeylWord::monomial(x), WeylWord::monomial(y), theta), ca * cb);
    return r;
}

/// a* = sum conj(a_x) (u^x)^-1.
inline WeylElement adjoint(const WeylElement& a, const ThetaMatrix& theta)
{
    WeylElement r(theta.dim());
    for (const auto& [x, c] : a.coeffs())
        r.add(word_inverse(WeylWord::monomial(x), theta), std::conj(c));
    return r;
}

/// alpha^n applied term by term.
inline WeylElement apply_auto(const NcAutomorphism& alpha, const WeylElement& a, long long n = 1)
{
    WeylElement r(alpha.dim());
    for (const auto& [x, c] : a.coeffs())
        r.add(alpha.iterate(WeylWord::monomial(x), n), c);
    return r;
}

} // namespace nilseq
