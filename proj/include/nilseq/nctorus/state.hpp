#pragma once

#include "nilseq/exactnum/phase_evaluator.hpp"
#include "nilseq/nctorus/algebra.hpp"
#include "nilseq/sequences/stream.hpp"
#include "nilseq/spectral/sparse_vector.hpp"

#include <cmath>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <vector>

namespace nilseq {

namespace detail {

inline std::vector<BigInt> to_big(const Site& s) { return {s.begin(), s.end()}; }

inline std::optional<Site> to_site(const std::vector<BigInt>& x)
{
    Site s;
    for (const auto& v : x) {
        if (v > std::numeric_limits<long long>::max() || v < std::numeric_limits<long long>::min())
            return std::nullopt;
        s.push_back(static_cast<long long>(v));
    }
    return s;
}

} // namespace detail

/// Left multiplication on the GNS space of the trace: delta_rho -> e(c + beta(x, rho)) delta_(x + rho).
inline SparseVector gns_apply(const WeylWord& w, const SparseVector& psi, const ThetaMatrix& theta)
{
    detail::require_word_dim(w, theta.dim());
    if (psi.dim() != theta.dim())
        throw error(errc::dimension_mismatch, "vector has dimension " + std::to_string(psi.dim()) + ", theta is " +
                                                  std::to_string(theta.dim()) + "x" + std::to_string(theta.dim()));
    auto shift = detail::to_site(w.x);
    if (!shift)
        throw error(errc::invalid_argument, "word exponents exceed the site range");
    SparseVector out(psi.dim());
    for (const auto& [rho, amp] : psi.sites()) {
        Site target(rho.size());
        for (std::size_t i = 0; i < rho.size(); ++i)
            target[i] = rho[i] + (*shift)[i];
        out.set(target, Amplitude{amp.coeff, (amp.phase + w.phase + theta.beta(w.x, detail::to_big(rho))).reduce_mod_1()});
    }
    return out;
}

/// <pi(a) w, w>, exact phases.
inline std::complex<double> vector_state(const WeylElement& a, const SparseVector& w, const ThetaMatrix& theta)
{
    std::complex<double> s(0.0);
    for (const auto& [x, c] : a.coeffs())
        s += c * inner(gns_apply(WeylWord::monomial(x), w, theta), w);
    return s;
}

struct StateSeq {
    SequenceStream stream;
    unsigned m = 1;
    /// One report per word of u, in the order of u.coeffs().
    std::vector<PhasePolyReport> reports;
};

/// rho(alpha^n u) = <pi(alpha^n u) w, w>.
///
/// A word whose exponent polynomials are constant on residue r contributes
/// c e(p_0r(t)) times a fixed overlap; any other word meets the finite set
/// supp w - supp w for finitely many t only. The tag records which kinds occur.
inline StateSeq state_seq(const NcAutomorphism& alpha, const WeylElement& u, const SparseVector& w)
{
    if (std::abs(w.norm() - 1.0) > 1e-12)
        throw error(errc::not_unit_vector, "state vector has norm " + std::to_string(w.norm()));
    if (w.dim() != alpha.dim() || u.dim() != alpha.dim())
        throw error(errc::dimension_mismatch, "state vector, element and automorphism dimensions differ");
    if (!w.atoms().empty())
        throw error(errc::invalid_argument, "state vectors for A_Theta live on the lattice; drop the atomic part");

    auto rep = classify_entropy(alpha.matrix());
    if (!rep.zero_entropy())
        throw error(errc::not_unipotent, "alpha_Theta needs a zero-entropy S for the polynomial form");

    StateSeq out;
    out.m = *rep.unipotence_order;

    struct Term {
        std::complex<double> c;
        PhasePolyReport report;
        std::vector<std::shared_ptr<const PhaseEvaluator>> phase;
    };
    auto terms = std::make_shared<std::vector<Term>>();
    bool any_const = false, any_moving = false;
    int step = 0;
    double bound = 0.0;
    for (const auto& [x, c] : u.coeffs()) {
        Term t{c, iterate_phase_polys(alpha, WeylWord::monomial(x), out.m), {}};
        for (std::size_t r = 0; r < out.m; ++r) {
            t.phase.push_back(std::make_shared<const PhaseEvaluator>(t.report.residues[r].phase));
            if (t.report.constant_exponents(r)) {
                any_const = true;
                step = std::max(step, std::max(t.report.residues[r].phase.degree(), 0));
            } else {
                any_moving = true;
            }
        }
        bound += std::abs(c);
        out.reports.push_back(t.report);
        terms->push_back(std::move(t));
    }

    std::set<Site> diffs;
    for (const auto& [a, va] : w.sites())
        for (const auto& [b, vb] : w.sites()) {
            Site s(a.size());
            for (std::size_t i = 0; i < a.size(); ++i)
                s[i] = a[i] - b[i];
            diffs.insert(std::move(s));
        }

    auto wv = std::make_shared<const SparseVector>(w);
    auto theta = std::make_shared<const ThetaMatrix>(alpha.theta());
    const long long m = out.m;
    auto eval = [terms, wv, theta, m, diffs = std::move(diffs)](std::int64_t n) {
        const long long r = ((n % m) + m) % m;
        const std::int64_t t = (n - r) / m;
        std::complex<double> s(0.0);
        for (const Term& term : *terms) {
            const ResidueForm& f = term.report.residues[static_cast<std::size_t>(r)];
            Site y;
            bool fits = true;
            for (const auto& p : f.exponents) {
                auto v = p.eval_i64(t);
                if (!v) {
                    fits = false;
                    break;
                }
                y.push_back(*v);
            }
            if (!fits || !diffs.count(y))
                continue;
            const double base = term.phase[static_cast<std::size_t>(r)]->frac(t);
            const std::vector<BigInt> yb = detail::to_big(y);
            std::complex<double> overlap(0.0);
            for (const auto& [rho, amp] : wv->sites()) {
                Site target(rho.size());
                for (std::size_t i = 0; i < rho.size(); ++i)
                    target[i] = rho[i] + y[i];
                auto it = wv->sites().find(target);
                if (it == wv->sites().end())
                    continue;
                const double ph = theta->beta(yb, detail::to_big(rho)).frac_double();
                overlap += amp.value() * cis(ph) * std::conj(it->second.value());
            }
            s += term.c * cis(base) * overlap;
        }
        return s;
    };

    SeqTag tag = any_moving ? (any_const ? SeqTag::almost_nil() : SeqTag::zero_density()) : SeqTag::nil(step);
    if (u.coeffs().empty())
        tag = SeqTag::nil(0);
    out.stream = SequenceStream(std::move(eval), bound, tag, "rho(alpha^n u)");
    return out;
}

inline StateSeq state_seq(const IntMatrix& s, const ThetaMatrix& theta, const WeylElement& u, const SparseVector& w)
{
    return state_seq(NcAutomorphism(s, theta), u, w);
}

struct ClockShiftReport {
    BigInt p = 0;
    BigInt q = 1;
    /// max |UV - e(p/q) VU| entrywise.
    double relation_error = 0.0;
    unsigned words_checked = 0;
    /// max over words of |matrix product - e(c) U^a V^b| entrywise.
    double max_word_error = 0.0;

    bool ok(double tol = 1e-12) const { return relation_error <= tol && max_word_error <= tol; }
};

/// q x q clock U = diag(e(kp/q)) and shift V e_k = e_(k+1) represent
/// u_1 u_2 = e(p/q) u_2 u_1; random words of up to max_len letters are
/// multiplied symbolically and as matrices.
inline ClockShiftReport clock_shift_check(const PhaseScalar& theta12, unsigned words = 64, unsigned max_len = 8,
                                          std::uint64_t seed = 1)
{
    if (!theta12.is_rational())
        throw error(errc::not_rational, "clock and shift matrices need a rational theta_12, got " + theta12.str());
    const Rational th = frac(theta12.rational_part());
    ClockShiftReport rep;
    rep.p = boost::multiprecision::numerator(th);
    rep.q = boost::multiprecision::denominator(th);
    if (rep.q > 4096)
        throw error(errc::invalid_argument, "denominator " + rep.q.str() + " too large for dense matrices");
    const auto q = static_cast<std::size_t>(rep.q);
    using Mat = std::vector<std::complex<double>>;

    auto mul = [q](const Mat& a, const Mat& b) {
        Mat c(q * q);
        for (std::size_t i = 0; i < q; ++i)
            for (std::size_t k = 0; k < q; ++k)
                if (a[i * q + k] != std::complex<double>(0.0))
                    for (std::size_t j = 0; j < q; ++j)
                        c[i * q + j] += a[i * q + k] * b[k * q + j];
        return c;
    };
    auto dist = [](const Mat& a, const Mat& b) {
        double d = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            d = std::max(d, std::abs(a[i] - b[i]));
        return d;
    };
    auto clock = [&](long long k) {
        Mat u(q * q);
        for (std::size_t j = 0; j < q; ++j)
            u[j * q + j] = e(PhaseScalar(th * Rational(static_cast<long long>(j) * k)));
        return u;
    };
    auto shift = [&](long long k) {
        Mat v(q * q);
        const long long qq = static_cast<long long>(q);
        for (std::size_t j = 0; j < q; ++j)
            v[static_cast<std::size_t>((((static_cast<long long>(j) + k) % qq) + qq) % qq) * q + j] = 1.0;
        return v;
    };

    const Mat U = clock(1), V = shift(1);
    Mat vu = mul(V, U);
    for (auto& z : vu)
        z *= e(PhaseScalar(th));
    rep.relation_error = dist(mul(U, V), vu);

    const ThetaMatrix theta = ThetaMatrix::two(PhaseScalar(th));
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<unsigned> len(1, std::max(1u, max_len));
    std::uniform_int_distribution<int> letter(0, 3);
    for (unsigned k = 0; k < words; ++k) {
        WeylWord sym = WeylWord::identity(2);
        Mat mat = clock(0);
        const unsigned L = len(rng);
        for (unsigned i = 0; i < L; ++i) {
            const int l = letter(rng);
            const std::size_t gen = static_cast<std::size_t>(l / 2);
            const long long pw = l % 2 ? -1 : 1;
            sym = word_mul(sym, WeylWord::generator(2, gen, pw), theta);
            mat = mul(mat, gen == 0 ? clock(pw) : shift(pw));
        }
        Mat expect = mul(clock(static_cast<long long>(sym.x[0])), shift(static_cast<long long>(sym.x[1])));
        for (auto& z : expect)
            z *= e(sym.phase);
        rep.max_word_error = std::max(rep.max_word_error, dist(mat, expect));
        ++rep.words_checked;
    }
    return rep;
}

} // namespace nilseq
