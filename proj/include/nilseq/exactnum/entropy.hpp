#pragma once

#include "nilseq/error.hpp"
#include "nilseq/exactnum/int_matrix.hpp"
#include "nilseq/exactnum/integral_polynomial.hpp"
#include "nilseq/exactnum/poly.hpp"
#include "nilseq/exactnum/roots.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <optional>
#include <utility>
#include <vector>

namespace nilseq {

/// det(xI - S), exact (Faddeev-LeVerrier; every division is exact).
inline IntPoly char_poly(const IntMatrix& s)
{
    const std::size_t d = s.dim();
    std::vector<BigInt> c(d + 1);
    c[d] = 1;
    IntMatrix m(d);
    for (std::size_t k = 1; k <= d; ++k) {
        IntMatrix next = s * m;
        for (std::size_t i = 0; i < d; ++i)
            next(i, i) += c[d - k + 1];
        m = std::move(next);
        IntMatrix sm = s * m;
        BigInt tr = 0;
        for (std::size_t i = 0; i < d; ++i)
            tr += sm(i, i);
        c[d - k] = -tr / BigInt(k);
    }
    return IntPoly(std::move(c));
}

inline unsigned euler_phi(unsigned n)
{
    unsigned r = n;
    for (unsigned p = 2; p * p <= n; ++p) {
        if (n % p)
            continue;
        while (n % p == 0)
            n /= p;
        r -= r / p;
    }
    if (n > 1)
        r -= r / n;
    return r;
}

/// The k-th cyclotomic polynomial.
inline IntPoly cyclotomic(unsigned k)
{
    static thread_local std::map<unsigned, IntPoly> cache;
    if (auto it = cache.find(k); it != cache.end())
        return it->second;
    std::vector<BigInt> xk(k + 1);
    xk[0] = -1;
    xk[k] = 1;
    IntPoly p{std::move(xk)};
    for (unsigned j = 1; j < k; ++j)
        if (k % j == 0)
            p = p.divmod(cyclotomic(j)).first;
    cache.emplace(k, p);
    return p;
}

/// Orders k with phi(k) <= d: the only cyclotomic factors a degree-d
/// characteristic polynomial can have.
inline std::vector<unsigned> cyclotomic_candidates(std::size_t d)
{
    std::vector<unsigned> ks;
    // phi(k) >= sqrt(k / 2), so k <= 2 d^2 covers every candidate.
    const unsigned limit = static_cast<unsigned>(2 * d * d + 2);
    for (unsigned k = 1; k <= limit; ++k)
        if (euler_phi(k) <= d)
            ks.push_back(k);
    return ks;
}

enum class EntropyVerdict { zero_entropy, positive_entropy };

struct EntropyReport {
    EntropyVerdict verdict = EntropyVerdict::zero_entropy;
    IntPoly characteristic;
    /// Minimal m with S^m unipotent (lcm of cyclotomic orders); ZeroEntropy only.
    std::optional<unsigned> unipotence_order;
    /// (k, multiplicity) for each Phi_k dividing the characteristic polynomial.
    std::vector<std::pair<unsigned, unsigned>> cyclotomic_factors;
    /// Characteristic polynomial with all cyclotomic factors removed.
    IntPoly residual;
    /// sum ln+|lambda|; PositiveEntropy only.
    std::optional<HighPrec> entropy;
    /// Lower bound h/2 for the noncommutative automorphism; PositiveEntropy only.
    std::optional<HighPrec> nc_lower_bound;
    /// Upper bound on |computed h - true h| from the root inclusion disks.
    HighPrec entropy_error_bound = 0;

    bool zero_entropy() const noexcept { return verdict == EntropyVerdict::zero_entropy; }
};

namespace detail {

inline bool is_nilpotent(const IntMatrix& n)
{
    IntMatrix p = IntMatrix::identity(n.dim());
    for (std::size_t i = 0; i < n.dim(); ++i)
        p = p * n;
    return p.is_zero();
}

/// sum over roots of ln+|z|, with a rigorous-enough error bound from the
/// inclusion radii.
inline std::pair<HighPrec, HighPrec> log_mahler_measure(const IntPoly& p)
{
    HighPrec h = 0;
    HighPrec err = 0;
    auto parts = squarefree_decomposition(to_rational(p));
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const unsigned mult = static_cast<unsigned>(i + 1);
        for (const auto& root : polynomial_roots(parts[i])) {
            HighPrec a = boost::multiprecision::abs(root.z);
            if (a > 1)
                h += mult * boost::multiprecision::log(a);
            HighPrec lo = std::max(HighPrec(1), a - root.inclusion_radius);
            err += mult * (boost::multiprecision::log(std::max(HighPrec(1), a + root.inclusion_radius)) -
                           boost::multiprecision::log(lo));
        }
    }
    return {h, err};
}

} // namespace detail

/// Zero entropy iff the characteristic polynomial is a product of cyclotomic
/// polynomials (Kronecker). The verdict is exact; the entropy value for
/// positive-entropy matrices comes from high-precision roots.
inline EntropyReport classify_entropy(const IntMatrix& s)
{
    s.require_gl();
    EntropyReport rep;
    rep.characteristic = char_poly(s);
    IntPoly rest = rep.characteristic;
    BigInt m = 1;
    for (unsigned k : cyclotomic_candidates(s.dim())) {
        IntPoly phi = cyclotomic(k);
        unsigned count = 0;
        while (rest.degree() >= phi.degree()) {
            auto [q, r] = rest.divmod(phi);
            if (!r.is_zero())
                break;
            rest = std::move(q);
            ++count;
        }
        if (count) {
            rep.cyclotomic_factors.emplace_back(k, count);
            m = lcm(m, BigInt(k));
        }
    }
    rep.residual = rest;
    if (rest.degree() == 0) {
        rep.verdict = EntropyVerdict::zero_entropy;
        rep.unipotence_order = static_cast<unsigned>(m);
        if (!detail::is_nilpotent(s.pow(static_cast<long long>(m)) - IntMatrix::identity(s.dim())))
            throw error(errc::not_unipotent, "cyclotomic factorization did not yield a unipotent power (internal)");
        return rep;
    }
    rep.verdict = EntropyVerdict::positive_entropy;
    auto [h, err] = detail::log_mahler_measure(rest);
    rep.entropy = h;
    rep.nc_lower_bound = h / 2;
    rep.entropy_error_bound = err;
    return rep;
}

/// d x d matrix of integer-valued polynomials in t.
class PolyMatrix {
public:
    PolyMatrix() = default;
    explicit PolyMatrix(std::size_t dim) : dim_(dim), a_(dim * dim) {}

    std::size_t dim() const noexcept { return dim_; }
    IntegralPolynomial& operator()(std::size_t i, std::size_t j) { return a_[i * dim_ + j]; }
    const IntegralPolynomial& operator()(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }

    IntMatrix eval(const BigInt& t) const
    {
        IntMatrix m(dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j)
                m(i, j) = (*this)(i, j).eval(t);
        return m;
    }

    /// Row-wise dot product with an integer vector: the polynomial vector P(t) x.
    std::vector<IntegralPolynomial> apply(const std::vector<BigInt>& x) const
    {
        std::vector<IntegralPolynomial> out(dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            for (std::size_t j = 0; j < dim_; ++j)
                if (x[j] != 0)
                    out[i] = out[i] + (*this)(i, j).scaled(x[j]);
        return out;
    }

    bool is_constant() const
    {
        for (const auto& p : a_)
            if (!p.is_constant())
                return false;
        return true;
    }

private:
    std::size_t dim_ = 0;
    std::vector<IntegralPolynomial> a_;
};

/// P_r(t) = S^(t m + r) for r = 0..m-1, as
///   P_r(t) = sum_{j<d} C(t, j) D^j S^r,  D = S^m - I nilpotent.
/// Valid for every integer t since the binomial series terminates.
inline std::vector<PolyMatrix> unipotent_power_polys(const IntMatrix& s, unsigned m)
{
    if (m == 0)
        throw error(errc::invalid_argument, "unipotence order must be positive");
    const std::size_t d = s.dim();
    IntMatrix dm = s.pow(static_cast<long long>(m)) - IntMatrix::identity(d);
    if (!detail::is_nilpotent(dm))
        throw error(errc::not_unipotent, "(S^" + std::to_string(m) + " - I)^" + std::to_string(d) + " != 0");
    std::vector<IntMatrix> dpow{IntMatrix::identity(d)};
    for (std::size_t j = 1; j < d; ++j)
        dpow.push_back(dpow.back() * dm);
    std::vector<PolyMatrix> out;
    IntMatrix sr = IntMatrix::identity(d);
    for (unsigned r = 0; r < m; ++r) {
        PolyMatrix pm(d);
        std::vector<IntMatrix> terms;
        for (const auto& dj : dpow)
            terms.push_back(dj * sr);
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < d; ++b) {
                std::vector<BigInt> c;
                for (const auto& t : terms)
                    c.push_back(t(a, b));
                pm(a, b) = IntegralPolynomial(std::move(c));
            }
        out.push_back(std::move(pm));
        sr = sr * s;
    }
    return out;
}

} // namespace nilseq
