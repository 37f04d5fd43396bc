#pragma once

#include "nilseq/exactnum/phase_evaluator.hpp"
#include "nilseq/exactnum/roots.hpp"
#include "nilseq/mobius/statistics.hpp"
#include "nilseq/sequences/stream.hpp"
#include "nilseq/spectral/operator.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <string>
#include <vector>

namespace nilseq {

struct SectorDescriptor {
    /// Atoms carry commuting diagonal actions, so they are always compact.
    bool atomic_compact = true;
    /// Lattice sector: compact iff every generator is a pure modulation.
    bool sparse_compact = true;
    std::string reason;
};

inline SectorDescriptor compact_subspace(const std::vector<ShiftPhaseOperator>& e_generators)
{
    SectorDescriptor s;
    for (std::size_t i = 0; i < e_generators.size(); ++i)
        if (!e_generators[i].is_diagonal()) {
            s.sparse_compact = false;
            s.reason = "generator " + std::to_string(i) + " shifts by " + site_str(e_generators[i].r) +
                       "; a nonzero translation has no l^2 eigenvector";
            return s;
        }
    s.reason = e_generators.empty() ? "trivial group" : "all generators are modulations";
    return s;
}

/// Integer roots of p, exactly. Candidates come from the complex roots of the
/// square-free part and are confirmed by exact evaluation.
inline std::vector<BigInt> integer_roots(const IntegralPolynomial& p)
{
    if (p.is_zero())
        throw error(errc::invalid_argument, "every integer is a root of the zero polynomial");
    RatPoly m = p.to_monomial();
    if (m.degree() < 1)
        return {};
    std::vector<BigInt> out;
    RatPoly f = m;
    while (!f.coeffs().empty() && f.coeffs()[0] == 0) {
        out.emplace_back(0);
        f = f.divmod(RatPoly({0, 1})).first;
    }
    if (f.degree() >= 1) {
        RatPoly sqf = f.divmod(gcd(f, f.derivative())).first;
        std::set<BigInt> cand;
        for (const auto& r : polynomial_roots(sqf)) {
            using boost::multiprecision::abs;
            if (abs(r.z.imag()) > r.inclusion_radius + HighPrec(0.5))
                continue;
            HighPrec re = r.z.real();
            BigInt c = static_cast<BigInt>(boost::multiprecision::round(re));
            for (int k = -1; k <= 1; ++k)
                cand.insert(c + k);
        }
        for (const auto& c : cand)
            if (c != 0 && p.eval(c) == 0)
                out.push_back(c);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// c e(f(n)).
struct NilTerm {
    std::complex<double> coeff;
    PhasePolynomial phase;
    std::string origin;
};

struct HitCertificate {
    /// Every n with R(n) in supp v - supp u, i.e. every n where c_n can be nonzero.
    std::vector<long long> hits;
    std::vector<std::complex<double>> values;
    /// ||u_w|| ||v_w||, the bound on each |c_n|.
    double per_hit_bound = 0.0;

    std::size_t count_within(std::uint64_t N) const
    {
        std::size_t k = 0;
        for (long long h : hits)
            k += static_cast<std::uint64_t>(h < 0 ? -h : h) <= N;
        return k;
    }

    /// (1/(2N+1)) sum_{|n|<=N} |c_n| from the hit set alone.
    double cesaro_abs(std::uint64_t N) const
    {
        double s = 0.0;
        for (std::size_t i = 0; i < hits.size(); ++i)
            if (static_cast<std::uint64_t>(hits[i] < 0 ? -hits[i] : hits[i]) <= N)
                s += std::abs(values[i]);
        return s / (2.0 * static_cast<double>(N) + 1.0);
    }

    double cesaro_bound(std::uint64_t N) const
    {
        return static_cast<double>(count_within(N)) * per_hit_bound / (2.0 * static_cast<double>(N) + 1.0);
    }
};

struct DecompositionResult {
    GClosedForm closed;
    ShiftPhaseOperator g0;
    SparseVector u_normalized; // g(0) u
    std::vector<ShiftPhaseOperator> e_generators;
    SectorDescriptor sector;
    std::vector<NilTerm> nil_terms;
    HitCertificate certificate;
    SequenceStream a;
    SequenceStream b;
    SequenceStream c;
};

namespace detail {

inline SequenceStream nil_stream(const std::vector<NilTerm>& terms)
{
    struct Eval {
        std::complex<double> c;
        std::shared_ptr<const PhaseEvaluator> f;
    };
    auto ev = std::make_shared<std::vector<Eval>>();
    double bound = 0.0;
    int step = 0;
    for (const auto& t : terms) {
        ev->push_back({t.coeff, std::make_shared<const PhaseEvaluator>(t.phase)});
        bound += std::abs(t.coeff);
        step = std::max(step, std::max(t.phase.degree(), 0));
    }
    return SequenceStream(
        [ev](std::int64_t n) {
            std::complex<double> s(0.0);
            for (const auto& t : *ev)
                s += t.c * (*t.f)(n);
            return s;
        },
        bound, SeqTag::nil(step), "b_n");
}

} // namespace detail

/// a_n = <g(n) u, v> = b_n + c_n with b_n the compact-sector part in closed
/// form and c_n the weak-mixing part, evaluated directly and certified by its
/// finite hit set.
inline DecompositionResult decompose(const GPolynomial& g, const SparseVector& u, const SparseVector& v)
{
    g.validate();
    const std::size_t dim = u.dim();
    detail::require_same_dim(dim, v.dim());
    if (!g.generators.empty())
        detail::require_same_dim(dim, g.dim());
    for (const auto& w : {&u, &v})
        for (const auto& [id, atom] : w->atoms())
            if (atom.eigenphases.size() != g.generators.size())
                throw error(errc::dimension_mismatch, "atom '" + id + "' has " + std::to_string(atom.eigenphases.size()) +
                                                          " eigenphases for " + std::to_string(g.generators.size()) + " generators");

    DecompositionResult res;
    res.closed = closed_form(g, dim);
    res.g0 = g_eval(g, BigInt(0), dim);
    res.u_normalized = apply_g(g, BigInt(0), u);

    // E is generated by g'(n) = g(n) g(0)^-1; n = 1..D+1 pin down the shift polynomial.
    const ShiftPhaseOperator g0inv = inverse(res.g0);
    const int D = std::max(g.max_degree(), 1);
    for (int n = 1; n <= D + 1; ++n)
        res.e_generators.push_back(compose(g_eval(g, BigInt(n), dim), g0inv));
    res.sector = compact_subspace(res.e_generators);

    for (const auto& [id, atom] : u.atoms()) {
        auto it = v.atoms().find(id);
        if (it == v.atoms().end())
            continue;
        res.nil_terms.push_back({atom.coeff * std::conj(it->second.coeff), atom_phase(g, atom.eigenphases), "atom " + id});
    }

    const GClosedForm& cf = res.closed;
    if (res.sector.sparse_compact) {
        Site r0(dim);
        for (std::size_t i = 0; i < dim; ++i)
            r0[i] = detail::to_ll(cf.shift[i].eval(BigInt(0)), "shift");
        for (const auto& [k, amp] : u.sites()) {
            Site t(dim);
            for (std::size_t i = 0; i < dim; ++i)
                t[i] = k[i] + r0[i];
            auto it = v.sites().find(t);
            if (it == v.sites().end())
                continue;
            PhasePolynomial f = cf.phase;
            for (std::size_t i = 0; i < dim; ++i)
                if (k[i] != 0)
                    f = f + cf.form[i].scaled(Rational(k[i]));
            res.nil_terms.push_back({amp.value() * std::conj(it->second.value()), f.reduced_mod_1(), "site " + site_str(k)});
        }
    }
    res.b = detail::nil_stream(res.nil_terms);

    // Weak-mixing part: lattice vectors when the lattice sector is not compact.
    auto uw = std::make_shared<const SparseVector>(res.sector.sparse_compact ? SparseVector(dim) : u.lattice_part());
    auto vw = std::make_shared<const SparseVector>(res.sector.sparse_compact ? SparseVector(dim) : v.lattice_part());
    res.certificate.per_hit_bound = uw->norm() * vw->norm();

    std::set<Site> diffs;
    for (const auto& [a, x] : vw->sites())
        for (const auto& [b, y] : uw->sites()) {
            Site s(dim);
            for (std::size_t i = 0; i < dim; ++i)
                s[i] = a[i] - b[i];
            diffs.insert(std::move(s));
        }

    auto cfp = std::make_shared<const GClosedForm>(cf);
    auto phase_ev = std::make_shared<const PhaseEvaluator>(cf.phase);
    auto c_eval = [cfp, phase_ev, uw, vw, diffs, dim](std::int64_t n) -> std::complex<double> {
        Site R(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            auto x = cfp->shift[i].eval_i64(n);
            if (!x)
                return 0.0;
            R[i] = *x;
        }
        if (!diffs.count(R))
            return 0.0;
        std::complex<double> s(0.0);
        for (const auto& [k, amp] : uw->sites()) {
            Site t(dim);
            for (std::size_t i = 0; i < dim; ++i)
                t[i] = k[i] + R[i];
            auto it = vw->sites().find(t);
            if (it == vw->sites().end())
                continue;
            PhaseScalar ph = amp.phase;
            for (std::size_t i = 0; i < dim; ++i)
                if (k[i] != 0)
                    ph += cfp->form[i].eval(BigInt(n)) * k[i];
            s += amp.coeff * cis(phase_ev->frac(n)) * e(ph) * std::conj(it->second.value());
        }
        return s;
    };

    if (!res.sector.sparse_compact && !uw->sites().empty()) {
        std::size_t moving = dim;
        for (std::size_t i = 0; i < dim; ++i)
            if (!cf.shift[i].is_constant()) {
                moving = i;
                break;
            }
        std::set<long long> hits;
        for (const Site& d : diffs) {
            IntegralPolynomial q = cf.shift[moving] + IntegralPolynomial::constant(BigInt(-d[moving]));
            for (const BigInt& n : integer_roots(q)) {
                bool all = true;
                for (std::size_t i = 0; i < dim && all; ++i)
                    all = cf.shift[i].eval(n) == d[i];
                if (all)
                    hits.insert(detail::to_ll(n, "hit"));
            }
        }
        for (long long h : hits) {
            res.certificate.hits.push_back(h);
            res.certificate.values.push_back(c_eval(h));
        }
    }
    res.c = SequenceStream(c_eval, res.certificate.per_hit_bound, SeqTag::zero_density(), "c_n");

    auto bs = std::make_shared<const SequenceStream>(res.b);
    res.a = SequenceStream([bs, c_eval](std::int64_t n) { return (*bs)(n) + c_eval(n); }, res.b.bound().value_or(0.0) +
                                                                                             res.certificate.per_hit_bound,
                           res.nil_terms.empty() ? SeqTag::zero_density() : SeqTag::almost_nil(), "a_n = <g(n)u, v>");
    if (res.certificate.hits.empty())
        res.a = res.a.with_tag(res.b.tag(), "a_n = <g(n)u, v>");
    return res;
}

/// <g(n) u, v> straight from the product of generator powers.
inline std::complex<double> direct_value(const GPolynomial& g, const SparseVector& u, const SparseVector& v, long long n)
{
    return inner(apply_g(g, BigInt(n), u), v);
}

struct BochnerAtom {
    std::complex<double> weight;
    std::vector<PhaseScalar> xi;
};

/// Atomic measure of a commuting diagonal family: <g(n)u, v> = sum_j c_j e(sum_i p_i(n) xi_ji).
struct BochnerMeasure {
    std::vector<BochnerAtom> atoms;

    std::complex<double> evaluate(const std::vector<IntegralPolynomial>& p, long long n) const
    {
        std::complex<double> s(0.0);
        for (const auto& a : atoms) {
            PhaseScalar ph;
            for (std::size_t i = 0; i < p.size(); ++i)
                ph += a.xi[i] * p[i].eval(BigInt(n));
            s += a.weight * e(ph);
        }
        return s;
    }

    double total_weight() const
    {
        double s = 0.0;
        for (const auto& a : atoms)
            s += a.weight.real();
        return s;
    }
};

inline BochnerMeasure bochner_data(const std::vector<ShiftPhaseOperator>& gens, const SparseVector& u, const SparseVector& v)
{
    for (std::size_t i = 0; i < gens.size(); ++i)
        if (!gens[i].is_diagonal())
            throw error(errc::not_diagonal, "generator " + std::to_string(i) + " shifts by " + site_str(gens[i].r));
    BochnerMeasure m;
    for (const auto& [k, amp] : u.sites()) {
        auto it = v.sites().find(k);
        if (it == v.sites().end())
            continue;
        BochnerAtom a{amp.value() * std::conj(it->second.value()), {}};
        for (const auto& g : gens)
            a.xi.push_back((g.phi + g.linear(k)).reduce_mod_1());
        m.atoms.push_back(std::move(a));
    }
    for (const auto& [id, atom] : u.atoms()) {
        auto it = v.atoms().find(id);
        if (it == v.atoms().end())
            continue;
        m.atoms.push_back({atom.coeff * std::conj(it->second.coeff), atom.eigenphases});
    }
    return m;
}

enum class AtomCase { I, II };

struct AtomPartition {
    std::vector<std::vector<std::size_t>> classes;
    std::vector<double> class_mass;
    /// sum over classes of (class mass)^2.
    double w2_mass = 0.0;
    AtomCase verdict = AtomCase::I;
};

/// xi ~ gamma iff every coefficient of f_xi - f_gamma is rational,
/// f_xi(n) = sum_j xi_j p_j(n). Atom mass is |weight|.
inline AtomPartition classify_atoms(const std::vector<BochnerAtom>& atoms, const std::vector<IntegralPolynomial>& p)
{
    const std::size_t k = atoms.size();
    std::vector<PhasePolynomial> f;
    for (const auto& a : atoms) {
        if (a.xi.size() != p.size())
            throw error(errc::dimension_mismatch, "atom eigenphase count differs from the number of polynomials");
        PhasePolynomial s;
        for (std::size_t j = 0; j < p.size(); ++j)
            s = s + PhasePolynomial::from_integral(p[j], a.xi[j]);
        f.push_back(s);
    }
    std::vector<std::size_t> parent(k);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            PhasePolynomial d = f[i] + f[j].scaled(Rational(-1));
            bool rational = true;
            for (const auto& c : d.coeffs())
                rational = rational && c.is_rational();
            if (rational)
                parent[find(i)] = find(j);
        }
    std::map<std::size_t, std::size_t> index;
    AtomPartition out;
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t root = find(i);
        auto [it, fresh] = index.try_emplace(root, out.classes.size());
        if (fresh) {
            out.classes.emplace_back();
            out.class_mass.push_back(0.0);
        }
        out.classes[it->second].push_back(i);
        out.class_mass[it->second] += std::abs(atoms[i].weight);
    }
    for (double m : out.class_mass)
        out.w2_mass += m * m;
    out.verdict = out.w2_mass > 0.0 ? AtomCase::II : AtomCase::I;
    return out;
}

} // namespace nilseq
