#pragma once

#include "nilseq/exactnum/poly.hpp"

#include <boost/multiprecision/cpp_complex.hpp>

#include <algorithm>
#include <vector>

namespace nilseq {

using HighComplex = boost::multiprecision::cpp_complex_50;

struct RootEstimate {
    HighComplex z;
    /// Radius of a disk around z guaranteed to contain a root of a
    /// square-free input: deg * |p(z)| / |p'(z)|.
    HighPrec inclusion_radius;
};

/// All complex roots of a square-free rational polynomial, by Aberth-Ehrlich
/// iteration at 50 digits.
inline std::vector<RootEstimate> polynomial_roots(const RatPoly& poly)
{
    using boost::multiprecision::abs;
    const int n = poly.degree();
    std::vector<RootEstimate> out;
    if (n < 1)
        return out;

    const RatPoly monic = poly.monic();
    std::vector<HighComplex> c;
    for (const auto& v : monic.coeffs())
        c.emplace_back(to_high(v));
    auto eval = [&](const HighComplex& z, HighComplex& dp) {
        HighComplex p = c.back();
        dp = HighComplex(0);
        for (int i = n - 1; i >= 0; --i) {
            dp = dp * z + p;
            p = p * z + c[static_cast<std::size_t>(i)];
        }
        return p;
    };

    HighPrec bound = 0;
    for (int i = 0; i < n; ++i)
        bound = std::max(bound, HighPrec(abs(c[static_cast<std::size_t>(i)])));
    bound += 1;
    std::vector<HighComplex> z(static_cast<std::size_t>(n));
    const HighPrec two_pi = 2 * boost::math::constants::pi<HighPrec>();
    for (int k = 0; k < n; ++k) {
        HighPrec ang = two_pi * k / n + HighPrec(0.4);
        z[static_cast<std::size_t>(k)] = HighComplex(bound * HighPrec(0.5) * boost::multiprecision::cos(ang),
                                                     bound * HighPrec(0.5) * boost::multiprecision::sin(ang));
    }

    const HighPrec tol("1e-45");
    for (int iter = 0; iter < 1000; ++iter) {
        HighPrec worst = 0;
        for (int k = 0; k < n; ++k) {
            auto& zk = z[static_cast<std::size_t>(k)];
            HighComplex dp;
            HighComplex p = eval(zk, dp);
            if (abs(p) == 0)
                continue;
            HighComplex ratio = p / dp;
            HighComplex sum(0);
            for (int j = 0; j < n; ++j)
                if (j != k)
                    sum += HighComplex(1) / (zk - z[static_cast<std::size_t>(j)]);
            HighComplex w = ratio / (HighComplex(1) - ratio * sum);
            zk -= w;
            worst = std::max(worst, HighPrec(abs(w)));
        }
        if (worst < tol)
            break;
    }

    for (const auto& zk : z) {
        HighComplex dp;
        HighComplex p = eval(zk, dp);
        HighPrec r = abs(dp) == 0 ? HighPrec(1) : HighPrec(n) * abs(p) / abs(dp);
        out.push_back({zk, r});
    }
    return out;
}

} // namespace nilseq
