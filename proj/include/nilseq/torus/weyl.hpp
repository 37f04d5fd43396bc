#pragma once

#include "nilseq/exactnum/phase_evaluator.hpp"
#include "nilseq/exactnum/phase_polynomial.hpp"
#include "nilseq/mobius/reduction.hpp"
#include "nilseq/mobius/statistics.hpp"
#include "nilseq/sequences/constructors.hpp"

#include <map>
#include <optional>
#include <vector>

namespace nilseq {

enum class Precision { exact, fast };

struct WeylOptions {
    /// exact: every term from the exact-rational / 50-digit evaluator.
    /// fast: each block starts from the exact skew-product state and iterates
    /// in double-double mod 1.
    Precision precision = Precision::exact;
    ReduceOptions reduce;
    /// Largest period for which the exact residue histogram is built.
    std::uint64_t max_period = 10'000'000;
};

struct WeylHarmonic {
    long long k = 1;
    /// Some non-constant coefficient of k p is irrational, so the averages
    /// must tend to 0.
    bool expect_zero = false;
    /// (1/(2N+1)) sum_{|n|<=N} e(k p(n)) per checkpoint.
    std::vector<Complex> averages;
    /// Exact period of e(k p(n)) when k p has rational non-constant part.
    std::optional<std::uint64_t> period;
    /// Mean over one period from the exact residue histogram.
    std::optional<Complex> period_mean;

    double abs_average(std::size_t i) const { return std::abs(averages[i]); }
};

struct WeylReport {
    std::vector<std::uint64_t> checkpoints;
    std::vector<WeylHarmonic> harmonics;
};

namespace detail {

inline std::vector<BigInt> divisors(const BigInt& n)
{
    std::vector<std::pair<BigInt, unsigned>> f;
    BigInt m = n;
    for (BigInt p = 2; p * p <= m; ++p) {
        unsigned e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        if (e)
            f.emplace_back(p, e);
    }
    if (m > 1)
        f.emplace_back(m, 1);
    std::vector<BigInt> d{1};
    for (const auto& [p, e] : f) {
        std::size_t sz = d.size();
        BigInt pk = 1;
        for (unsigned i = 1; i <= e; ++i) {
            pk *= p;
            for (std::size_t j = 0; j < sz; ++j)
                d.push_back(d[j] * pk);
        }
    }
    std::sort(d.begin(), d.end());
    return d;
}

struct RationalPart {
    IntegralPolynomial numer; // q(n) = numer(n) / denom mod 1
    BigInt denom = 1;
    PhaseScalar constant_irrational;
};

inline RationalPart split_rational(const PhasePolynomial& p)
{
    PhasePolynomial b = p.to_binomial().reduced_mod_1();
    RationalPart r;
    BigInt d = 1;
    for (const auto& c : b.coeffs())
        d = lcm(d, boost::multiprecision::denominator(c.rational_part()));
    std::vector<BigInt> num;
    for (const auto& c : b.coeffs()) {
        const Rational& q = c.rational_part();
        num.push_back(boost::multiprecision::numerator(q) * (d / boost::multiprecision::denominator(q)));
    }
    r.numer = IntegralPolynomial(std::move(num));
    r.denom = d;
    if (!b.coeffs().empty()) {
        r.constant_irrational = b.coeff(0) - PhaseScalar(b.coeff(0).rational_part());
    }
    return r;
}

/// Least P > 0 with q(n + P) = q(n) mod 1 for all n; P divides denom * deg!.
inline BigInt exact_period(const RationalPart& r)
{
    const int deg = std::max(r.numer.degree(), 0);
    BigInt bound = r.denom * factorial(static_cast<unsigned>(deg));
    for (const BigInt& P : divisors(bound)) {
        bool ok = true;
        for (int n = 0; n <= deg && ok; ++n)
            ok = floor_mod(r.numer.eval(BigInt(n) + P) - r.numer.eval(BigInt(n)), r.denom) == 0;
        if (ok)
            return P;
    }
    return bound;
}

} // namespace detail

/// Two-sided Weyl averages of e(k p(n)) for each harmonic k.
inline WeylReport weyl_test(const PhasePolynomial& p, const std::vector<long long>& harmonics, std::vector<std::uint64_t> checkpoints,
                            const WeylOptions& opts = {})
{
    checkpoints = normalize_checkpoints(std::move(checkpoints));
    WeylReport rep;
    rep.checkpoints = checkpoints;
    for (long long k : harmonics) {
        if (k == 0)
            throw error(errc::invalid_argument, "harmonic k must be nonzero");
        WeylHarmonic h;
        h.k = k;
        const PhasePolynomial kp = p.scaled(Rational(k)).reduced_mod_1();
        h.expect_zero = kp.has_irrational_nonconstant();

        if (!h.expect_zero) {
            auto rp = detail::split_rational(kp);
            BigInt P = detail::exact_period(rp);
            if (P <= opts.max_period) {
                const auto period = static_cast<std::uint64_t>(P);
                std::map<BigInt, std::uint64_t> hist;
                for (std::uint64_t n = 0; n < period; ++n)
                    ++hist[floor_mod(rp.numer.eval(BigInt(n)), rp.denom)];
                Complex s(0.0);
                for (const auto& [res, count] : hist)
                    s += static_cast<double>(count) * cis(static_cast<double>(Rational(res, rp.denom)));
                h.period = period;
                h.period_mean = e(rp.constant_irrational) * s / static_cast<double>(period);
            }
        }

        std::vector<std::uint64_t> pos, neg;
        for (auto n : checkpoints) {
            pos.push_back(n + 1);
            neg.push_back(n);
        }
        std::vector<std::array<double, 2>> sp, sn;
        const bool skew = opts.precision == Precision::fast && kp.degree() >= 1;
        if (skew) {
            const SkewProductState base = furstenberg_orbit(kp).state;
            auto fill = [&base](bool forward) {
                return [&base, forward](std::uint64_t lo, std::size_t n, const std::array<double*, 2>& out) {
                    const std::int64_t start = forward ? static_cast<std::int64_t>(lo) : -static_cast<std::int64_t>(lo) - 1;
                    FloatSkewState s(base.at(start));
                    for (std::size_t i = 0; i < n; ++i) {
                        Complex v = cis(s.last());
                        out[0][i] = v.real();
                        out[1][i] = v.imag();
                        if (forward)
                            s.step();
                        else
                            s.step_back();
                    }
                };
            };
            sp = prefix_sums_blocked<2>(fill(true), pos, opts.reduce);
            sn = prefix_sums_blocked<2>(fill(false), neg, opts.reduce);
        } else {
            const PhaseEvaluator ev(kp);
            auto f_pos = [&ev](std::uint64_t i) -> std::array<double, 2> {
                Complex v = ev(static_cast<std::int64_t>(i));
                return {v.real(), v.imag()};
            };
            auto f_neg = [&ev](std::uint64_t i) -> std::array<double, 2> {
                Complex v = ev(-static_cast<std::int64_t>(i) - 1);
                return {v.real(), v.imag()};
            };
            sp = prefix_sums<2>(f_pos, pos, opts.reduce);
            sn = prefix_sums<2>(f_neg, neg, opts.reduce);
        }
        for (std::size_t i = 0; i < checkpoints.size(); ++i) {
            const double w = 2.0 * static_cast<double>(checkpoints[i]) + 1.0;
            h.averages.emplace_back((sp[i][0] + sn[i][0]) / w, (sp[i][1] + sn[i][1]) / w);
        }
        rep.harmonics.push_back(std::move(h));
    }
    return rep;
}

inline void write_weyl_csv(std::ostream& os, const WeylReport& r)
{
    char buf[160];
    os << "k,N,re_avg,im_avg,abs_avg,expect_zero\n";
    for (const auto& h : r.harmonics)
        for (std::size_t i = 0; i < r.checkpoints.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%lld,%llu,%.17g,%.17g,%.17g,%d\n", h.k, static_cast<unsigned long long>(r.checkpoints[i]),
                          h.averages[i].real(), h.averages[i].imag(), std::abs(h.averages[i]), h.expect_zero ? 1 : 0);
            os << buf;
        }
}

} // namespace nilseq
