#pragma once

#include "nilseq/exactnum/phase_polynomial.hpp"

#include <algorithm>
#include <complex>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <optional>
#include <vector>

namespace nilseq {

/// Evaluates frac(p(n)) for machine-integer n without building PhaseScalars.
///
/// p is split into its rational component and one component per generator,
/// each written as (integer-valued polynomial) / (common denominator). The
/// rational component is reduced exactly in integer arithmetic; each
/// generator component is reduced at HighPrec after scaling by value/denom.
/// The result agrees with p.eval(n).frac_double() up to the final rounding.
class PhaseEvaluator {
public:
    PhaseEvaluator() = default;

    explicit PhaseEvaluator(const PhasePolynomial& poly)
    {
        PhasePolynomial p = poly.to_binomial();
        const auto& c = p.coeffs();
        degree_ = p.degree();
        std::vector<Rational> rat(c.size());
        std::map<std::string, std::pair<GeneratorRef, std::vector<Rational>>> gens;
        for (std::size_t j = 0; j < c.size(); ++j) {
            rat[j] = c[j].rational_part();
            for (const auto& [id, t] : c[j].irrational_terms()) {
                auto& slot = gens[id];
                slot.first = t.gen;
                slot.second.resize(c.size());
                slot.second[j] = t.coeff;
            }
        }
        rational_ = make_component(rat, HighPrec(1));
        for (auto& [id, g] : gens) {
            g.second.resize(c.size());
            generators_.push_back(make_component(g.second, g.first->value));
        }
    }

    int degree() const noexcept { return degree_; }

    /// frac(p(n)) in [0, 1).
    double frac(std::int64_t n) const
    {
        std::vector<std::optional<__int128>> binom = binomials(n);
        double f = 0.0;
        {
            // Exact: (V mod D) / D.
            const Component& c = rational_;
            if (auto v = small_value(c, binom)) {
                __int128 d = c.denom_small;
                __int128 r = *v % d;
                if (r < 0)
                    r += d;
                f += static_cast<double>(r) / static_cast<double>(d);
            } else {
                BigInt V = big_value(c, n);
                BigInt r = floor_mod(V, c.denom);
                f += static_cast<double>(Rational(r, c.denom));
            }
        }
        for (const Component& c : generators_) {
            HighPrec x;
            if (auto v = small_value(c, binom); v && *v <= INT64_MAX && *v >= INT64_MIN)
                x = HighPrec(static_cast<std::int64_t>(*v)) * c.scale;
            else
                x = HighPrec(big_value(c, n)) * c.scale;
            f += static_cast<double>(nilseq::frac(x));
        }
        f -= std::floor(f);
        return f >= 1.0 ? 0.0 : f;
    }

    std::complex<double> operator()(std::int64_t n) const { return cis(frac(n)); }

private:
    struct Component {
        std::vector<BigInt> numer;           // binomial-basis numerators
        std::vector<std::optional<std::int64_t>> numer_small;
        BigInt denom = 1;
        __int128 denom_small = 1;
        HighPrec scale = 1;                   // generator value / denom
    };

    static Component make_component(const std::vector<Rational>& coeffs, const HighPrec& value)
    {
        Component c;
        BigInt d = 1;
        for (const auto& q : coeffs)
            d = lcm(d, boost::multiprecision::denominator(q));
        c.denom = d;
        for (const auto& q : coeffs) {
            c.numer.push_back(boost::multiprecision::numerator(q) * (d / boost::multiprecision::denominator(q)));
            c.numer_small.push_back(to_i64(c.numer.back()));
        }
        auto ds = to_i64(d);
        c.denom_small = ds ? *ds : 0;
        c.scale = value / HighPrec(d);
        return c;
    }

    std::vector<std::optional<__int128>> binomials(std::int64_t n) const
    {
        std::vector<std::optional<__int128>> b(static_cast<std::size_t>(std::max(degree_, 0)) + 1);
        __int128 v = 1;
        bool ok = true;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (j > 0 && ok) {
                __int128 nv;
                ok = !__builtin_mul_overflow(v, static_cast<__int128>(n) - static_cast<__int128>(j - 1), &nv);
                if (ok)
                    v = nv / static_cast<__int128>(j);
            }
            if (ok)
                b[j] = v;
        }
        return b;
    }

    static std::optional<__int128> small_value(const Component& c, const std::vector<std::optional<__int128>>& binom)
    {
        if (c.denom_small == 0)
            return std::nullopt;
        __int128 r = 0;
        for (std::size_t j = 0; j < c.numer.size(); ++j) {
            if (c.numer[j] == 0)
                continue;
            if (!c.numer_small[j] || !binom[j])
                return std::nullopt;
            __int128 t;
            if (__builtin_mul_overflow(static_cast<__int128>(*c.numer_small[j]), *binom[j], &t) ||
                __builtin_add_overflow(r, t, &r))
                return std::nullopt;
        }
        return r;
    }

    static BigInt big_value(const Component& c, std::int64_t n)
    {
        BigInt r = 0;
        BigInt b = 1;
        for (std::size_t j = 0; j < c.numer.size(); ++j) {
            if (j > 0)
                b = b * (BigInt(n) - BigInt(j - 1)) / BigInt(j);
            r += c.numer[j] * b;
        }
        return r;
    }

    int degree_ = -1;
    Component rational_;
    std::vector<Component> generators_;
};

} // namespace nilseq
