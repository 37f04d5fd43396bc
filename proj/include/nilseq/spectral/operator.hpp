#pragma once

#include "nilseq/error.hpp"
#include "nilseq/exactnum/integral_polynomial.hpp"
#include "nilseq/exactnum/phase_polynomial.hpp"
#include "nilseq/exactnum/phase_scalar.hpp"
#include "nilseq/spectral/sparse_vector.hpp"

#include <limits>
#include <string>
#include <vector>

namespace nilseq {

namespace detail {

inline long long to_ll(const BigInt& v, const char* what)
{
    if (v > std::numeric_limits<long long>::max() || v < std::numeric_limits<long long>::min())
        throw error(errc::invalid_argument, std::string(what) + " " + v.str() + " exceeds the 64-bit site range");
    return static_cast<long long>(v);
}

} // namespace detail

/// delta_k -> e(phi + L(k)) delta_(k + r) on l^2(Z^delta).
struct ShiftPhaseOperator {
    Site r;
    PhaseScalar phi;
    std::vector<PhaseScalar> form;

    static ShiftPhaseOperator identity(std::size_t dim) { return {Site(dim), PhaseScalar(), std::vector<PhaseScalar>(dim)}; }
    static ShiftPhaseOperator shift(Site r) { return {r, PhaseScalar(), std::vector<PhaseScalar>(r.size())}; }
    static ShiftPhaseOperator modulation(std::vector<PhaseScalar> form, PhaseScalar phi = {})
    {
        return {Site(form.size()), std::move(phi), std::move(form)};
    }

    std::size_t dim() const noexcept { return r.size(); }
    bool is_diagonal() const
    {
        for (long long v : r)
            if (v != 0)
                return false;
        return true;
    }

    PhaseScalar linear(const Site& k) const
    {
        PhaseScalar s;
        for (std::size_t i = 0; i < k.size(); ++i)
            if (k[i] != 0)
                s += form[i] * k[i];
        return s;
    }

    /// Phases reduced mod 1 coordinatewise.
    ShiftPhaseOperator normalized() const
    {
        ShiftPhaseOperator o{r, phi.reduce_mod_1(), {}};
        for (const auto& l : form)
            o.form.push_back(l.reduce_mod_1());
        return o;
    }

    bool operator==(const ShiftPhaseOperator& o) const
    {
        if (r != o.r || form.size() != o.form.size() || !equal_mod_1(phi, o.phi))
            return false;
        for (std::size_t i = 0; i < form.size(); ++i)
            if (!equal_mod_1(form[i], o.form[i]))
                return false;
        return true;
    }

    std::string str() const
    {
        std::string s = "shift " + site_str(r) + ", phase " + phi.str() + ", form [";
        for (std::size_t i = 0; i < form.size(); ++i)
            s += (i ? ", " : "") + form[i].str();
        return s + "]";
    }
};

namespace detail {

inline void require_same_dim(std::size_t a, std::size_t b)
{
    if (a != b)
        throw error(errc::dimension_mismatch, "operator dimensions " + std::to_string(a) + " and " + std::to_string(b) + " differ");
}

} // namespace detail

/// outer * inner = (r1 + r2, phi1 + phi2 + L2(r1), L1 + L2).
inline ShiftPhaseOperator compose(const ShiftPhaseOperator& outer, const ShiftPhaseOperator& inner)
{
    detail::require_same_dim(outer.dim(), inner.dim());
    ShiftPhaseOperator o;
    o.r.resize(inner.dim());
    for (std::size_t i = 0; i < inner.dim(); ++i)
        o.r[i] = inner.r[i] + outer.r[i];
    o.phi = (inner.phi + outer.phi + outer.linear(inner.r)).reduce_mod_1();
    for (std::size_t i = 0; i < inner.dim(); ++i)
        o.form.push_back((inner.form[i] + outer.form[i]).reduce_mod_1());
    return o;
}

/// (-r, -phi + L(r), -L).
inline ShiftPhaseOperator inverse(const ShiftPhaseOperator& w)
{
    ShiftPhaseOperator o;
    for (long long v : w.r)
        o.r.push_back(-v);
    o.phi = (-w.phi + w.linear(w.r)).reduce_mod_1();
    for (const auto& l : w.form)
        o.form.push_back((-l).reduce_mod_1());
    return o;
}

/// W^n = (n r, n phi + C(n, 2) L(r), n L) for every integer n.
inline ShiftPhaseOperator op_pow(const ShiftPhaseOperator& w, const BigInt& n)
{
    ShiftPhaseOperator o;
    for (long long v : w.r)
        o.r.push_back(detail::to_ll(n * v, "shift"));
    o.phi = (w.phi * n + w.linear(w.r) * binomial(n, 2)).reduce_mod_1();
    for (const auto& l : w.form)
        o.form.push_back((l * n).reduce_mod_1());
    return o;
}

/// Lattice part only; the atomic part is passed through.
inline SparseVector apply(const ShiftPhaseOperator& w, const SparseVector& psi)
{
    detail::require_same_dim(w.dim(), psi.dim());
    SparseVector out = psi.atomic_part();
    for (const auto& [k, amp] : psi.sites()) {
        Site t(k.size());
        for (std::size_t i = 0; i < k.size(); ++i)
            t[i] = k[i] + w.r[i];
        out.set(t, Amplitude{amp.coeff, (amp.phase + w.phi + w.linear(k)).reduce_mod_1()});
    }
    return out;
}

/// g(n) = U_1^p_1(n) ... U_k^p_k(n). Atoms carry one eigenphase per generator.
struct GPolynomial {
    std::vector<ShiftPhaseOperator> generators;
    std::vector<IntegralPolynomial> exponents;

    std::size_t dim() const { return generators.empty() ? 0 : generators.front().dim(); }

    void validate() const
    {
        if (generators.size() != exponents.size())
            throw error(errc::arity_mismatch, std::to_string(generators.size()) + " generators but " + std::to_string(exponents.size()) +
                                                  " exponent polynomials");
        for (const auto& g : generators)
            detail::require_same_dim(g.dim(), dim());
    }

    int max_degree() const
    {
        int d = 0;
        for (const auto& p : exponents)
            d = std::max(d, p.degree());
        return d;
    }
};

/// Left-to-right product of op_pow(U_i, p_i(n)).
inline ShiftPhaseOperator g_eval(const GPolynomial& g, const BigInt& n, std::size_t dim)
{
    g.validate();
    ShiftPhaseOperator acc = ShiftPhaseOperator::identity(dim);
    for (std::size_t i = 0; i < g.generators.size(); ++i)
        acc = compose(acc, op_pow(g.generators[i], g.exponents[i].eval(n)));
    return acc;
}

inline ShiftPhaseOperator g_eval(const GPolynomial& g, const BigInt& n) { return g_eval(g, n, g.dim()); }

/// sum_i p_i(n) lambda_i for an atom with eigenphases lambda.
inline PhasePolynomial atom_phase(const GPolynomial& g, const std::vector<PhaseScalar>& eigenphases)
{
    if (eigenphases.size() != g.generators.size())
        throw error(errc::dimension_mismatch, "atom has " + std::to_string(eigenphases.size()) + " eigenphases for " +
                                                  std::to_string(g.generators.size()) + " generators");
    PhasePolynomial f;
    for (std::size_t i = 0; i < eigenphases.size(); ++i)
        f = f + PhasePolynomial::from_integral(g.exponents[i], eigenphases[i]);
    return f.reduced_mod_1();
}

/// g(n) applied to both sectors.
inline SparseVector apply_g(const GPolynomial& g, const BigInt& n, const SparseVector& psi)
{
    SparseVector out = apply(g_eval(g, n, psi.dim()), psi.lattice_part());
    for (const auto& [id, atom] : psi.atoms()) {
        PhaseScalar ph;
        for (std::size_t i = 0; i < atom.eigenphases.size(); ++i)
            ph += atom.eigenphases[i] * g.exponents.at(i).eval(n);
        if (atom.eigenphases.size() != g.generators.size())
            throw error(errc::dimension_mismatch, "atom '" + id + "' has the wrong number of eigenphases");
        out.add_atom(id, atom.coeff * e(ph), atom.eigenphases);
    }
    return out;
}

/// g(n) = (R(n), Phi(n), L_n) with every component polynomial in n.
struct GClosedForm {
    std::vector<IntegralPolynomial> shift;
    PhasePolynomial phase;
    std::vector<PhasePolynomial> form;

    bool constant_shift() const
    {
        for (const auto& p : shift)
            if (!p.is_constant())
                return false;
        return true;
    }
};

/// Interpolates g(0..2D) exactly (D = max deg p_i; Phi has degree <= 2D)
/// and checks three further points.
inline GClosedForm closed_form(const GPolynomial& g, std::size_t dim)
{
    g.validate();
    const int D = std::max(g.max_degree(), 1);
    const int fit = 2 * D + 1;
    std::vector<ShiftPhaseOperator> ops;
    for (int n = 0; n < fit + 3; ++n)
        ops.push_back(g_eval(g, BigInt(n), dim));
    GClosedForm cf;
    for (std::size_t i = 0; i < dim; ++i) {
        std::vector<BigInt> rs;
        std::vector<PhaseScalar> ls;
        for (int n = 0; n < fit; ++n) {
            rs.emplace_back(ops[static_cast<std::size_t>(n)].r[i]);
            ls.push_back(ops[static_cast<std::size_t>(n)].form[i]);
        }
        cf.shift.push_back(IntegralPolynomial::from_values(std::move(rs)));
        cf.form.push_back(PhasePolynomial::from_values(std::move(ls)).reduced_mod_1());
    }
    std::vector<PhaseScalar> ph;
    for (int n = 0; n < fit; ++n)
        ph.push_back(ops[static_cast<std::size_t>(n)].phi);
    cf.phase = PhasePolynomial::from_values(std::move(ph)).reduced_mod_1();
    for (int n = fit; n < fit + 3; ++n) {
        const auto& op = ops[static_cast<std::size_t>(n)];
        bool ok = equal_mod_1(cf.phase.eval(BigInt(n)), op.phi);
        for (std::size_t i = 0; i < dim && ok; ++i)
            ok = cf.shift[i].eval(BigInt(n)) == op.r[i] && equal_mod_1(cf.form[i].eval(BigInt(n)), op.form[i]);
        if (!ok)
            throw error(errc::mismatch_at, "closed form of g(n) disagrees with the product at n = " + std::to_string(n));
    }
    return cf;
}

} // namespace nilseq
