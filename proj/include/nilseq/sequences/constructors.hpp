#pragma once

#include "nilseq/detail/double_double.hpp"
#include "nilseq/exactnum/phase_evaluator.hpp"
#include "nilseq/exactnum/phase_polynomial.hpp"
#include "nilseq/sequences/stream.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace nilseq {

/// a_n = e(p(n)); a basic nilsequence of step deg p.
inline SequenceStream poly_exp(const PhasePolynomial& p)
{
    auto ev = std::make_shared<const PhaseEvaluator>(p);
    return SequenceStream([ev](std::int64_t n) { return (*ev)(n); }, 1.0, SeqTag::nil(std::max(p.degree(), 0)),
                          "e(" + p.str() + ")");
}

/// q_n(t) = e(C(n, 2) t).
inline SequenceStream quadratic_seq(const PhaseScalar& t)
{
    return poly_exp(PhasePolynomial(Basis::binomial, {PhaseScalar(), PhaseScalar(), t}))
        .with_tag(SeqTag::nil(2), "quadratic(" + t.str() + ")");
}

/// Number of terms on each side of the Gaussian peak needed for a tail below eps.
inline int theta_cutoff(double eps)
{
    int k = 2;
    while (true) {
        double km1 = k - 1;
        double tail = 2.0 * std::exp(-std::numbers::pi * km1 * km1) / (1.0 - std::exp(-2.0 * std::numbers::pi * km1));
        if (tail < eps)
            return k;
        ++k;
    }
}

/// kappa(s, t) = sum_k exp(-pi (t + k)^2) e(k s), truncated to |k + round(t)| <= K.
inline Complex theta_kappa(double s, double t, double eps = 1e-12)
{
    const int K = theta_cutoff(eps);
    const double c = std::round(t);
    const auto k0 = static_cast<long long>(-c);
    // Sum outward from the peak, smallest terms first on each side.
    Complex acc(0.0);
    for (int j = K; j >= 1; --j)
        for (int sign : {1, -1}) {
            long long k = k0 + sign * j;
            double x = t + static_cast<double>(k);
            acc += std::exp(-std::numbers::pi * x * x) * cis(std::fmod(static_cast<double>(k) * s, 1.0));
        }
    double x0 = t + static_cast<double>(k0);
    acc += std::exp(-std::numbers::pi * x0 * x0) * cis(std::fmod(static_cast<double>(k0) * s, 1.0));
    return acc;
}

/// omega_n(alpha, beta) = kappa(n alpha, n beta) e(C(n, 2) alpha beta).
/// kappa(s, f + j) = e(-j s) kappa(s, f) moves n beta into [-1/2, 1/2), and
/// all large products are reduced at HighPrec before dropping to double.
inline SequenceStream heisenberg_seq(const HighPrec& alpha, const HighPrec& beta, double eps = 1e-12)
{
    const HighPrec ab = alpha * beta;
    const double bound = std::abs(theta_kappa(0.0, 0.0, eps));
    return SequenceStream(
        [alpha, beta, ab, eps](std::int64_t n) {
            HighPrec na = HighPrec(n) * alpha;
            HighPrec nb = HighPrec(n) * beta;
            HighPrec j = boost::multiprecision::round(nb);
            double f = static_cast<double>(nb - j);
            double s = static_cast<double>(frac(na));
            double shift = static_cast<double>(frac(-j * na));
            HighPrec c2 = HighPrec(n) * HighPrec(n - 1) / 2;
            double q = static_cast<double>(frac(c2 * ab));
            return theta_kappa(s, f, eps) * cis(shift) * cis(q);
        },
        bound, SeqTag::nil(2), "heisenberg");
}

/// Lower-triangular skew map on T^(k+1):
///   (alpha, x_1, ..., x_k) -> (alpha, x_1 + alpha, x_2 + x_1, ..., x_k + x_{k-1}).
/// After n steps the last coordinate is
///   C(n, k) alpha + C(n, k-1) x_1 + ... + n x_{k-1} + x_k.
struct SkewProductState {
    PhaseScalar alpha;
    std::vector<PhaseScalar> x;

    std::size_t dimension() const noexcept { return x.size(); }

    void step()
    {
        for (std::size_t i = x.size(); i-- > 1;)
            x[i] = (x[i] + x[i - 1]).reduce_mod_1();
        if (!x.empty())
            x[0] = (x[0] + alpha).reduce_mod_1();
    }

    void step_back()
    {
        if (x.empty())
            return;
        x[0] = (x[0] - alpha).reduce_mod_1();
        for (std::size_t i = 1; i < x.size(); ++i)
            x[i] = (x[i] - x[i - 1]).reduce_mod_1();
    }

    /// T^n, exact, for any integer n.
    SkewProductState iterate(std::int64_t n) const
    {
        SkewProductState s = *this;
        for (std::int64_t i = 0; i < n; ++i)
            s.step();
        for (std::int64_t i = 0; i > n; --i)
            s.step_back();
        return s;
    }

    /// T^n in closed form: x_i(n) = sum_{l<=i} C(n, i - l) x_l with x_0 = alpha.
    SkewProductState at(std::int64_t n) const
    {
        SkewProductState s;
        s.alpha = alpha;
        for (std::size_t i = 1; i <= x.size(); ++i) {
            PhaseScalar v;
            for (std::size_t l = 0; l <= i; ++l) {
                const PhaseScalar& xl = l == 0 ? alpha : x[l - 1];
                v += xl * binomial(BigInt(n), static_cast<unsigned>(i - l));
            }
            s.x.push_back(v.reduce_mod_1());
        }
        return s;
    }

    const PhaseScalar& last() const { return x.empty() ? alpha : x.back(); }
};

/// The same skew map in double-double arithmetic mod 1.
struct FloatSkewState {
    detail::DoubleDouble alpha;
    std::vector<detail::DoubleDouble> x;

    explicit FloatSkewState(const SkewProductState& s) : alpha(split(s.alpha.frac_high()))
    {
        for (const auto& v : s.x)
            x.push_back(split(v.frac_high()));
    }

    void step()
    {
        for (std::size_t i = x.size(); i-- > 1;)
            x[i] = detail::mod1(x[i] + x[i - 1]);
        if (!x.empty())
            x[0] = detail::mod1(x[0] + alpha);
    }

    void step_back()
    {
        if (x.empty())
            return;
        x[0] = detail::mod1(x[0] - alpha);
        for (std::size_t i = 1; i < x.size(); ++i)
            x[i] = detail::mod1(x[i] - x[i - 1]);
    }

    double last() const { return x.empty() ? alpha.value() : x.back().value(); }

    static detail::DoubleDouble split(const HighPrec& v)
    {
        double hi = static_cast<double>(v);
        double lo = static_cast<double>(v - HighPrec(hi));
        return {hi, lo};
    }
};

struct FurstenbergOrbit {
    SkewProductState state;
    SequenceStream stream;
};

/// Skew-product realization of e(p(n)) for deg p = k >= 1: alpha = k! a_k and
/// x_i read off the binomial-basis coefficients of p.
inline FurstenbergOrbit furstenberg_orbit(const PhasePolynomial& p)
{
    PhasePolynomial b = p.to_binomial();
    const int k = b.degree();
    if (k < 1)
        throw error(errc::degree_zero, "constant phase polynomial; use poly_exp");
    SkewProductState s;
    s.alpha = b.coeff(static_cast<std::size_t>(k)).reduce_mod_1();
    for (int i = 1; i <= k; ++i)
        s.x.push_back(b.coeff(static_cast<std::size_t>(k - i)).reduce_mod_1());
    return {s, poly_exp(p).with_tag(SeqTag::nil(k), "furstenberg(" + p.str() + ")")};
}

} // namespace nilseq
