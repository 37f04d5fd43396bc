#pragma once

#include "nilseq/error.hpp"
#include "nilseq/mobius/reduction.hpp"
#include "nilseq/mobius/sieve.hpp"
#include "nilseq/sequences/stream.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <vector>

namespace nilseq {

/// 10, 100, ... below limit, then limit itself.
inline std::vector<std::uint64_t> default_checkpoints(std::uint64_t limit)
{
    std::vector<std::uint64_t> c;
    for (std::uint64_t p = 10; p < limit; p *= 10)
        c.push_back(p);
    if (limit >= 1)
        c.push_back(limit);
    return c;
}

inline std::vector<std::uint64_t> normalize_checkpoints(std::vector<std::uint64_t> c)
{
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    if (!c.empty() && c.front() == 0)
        throw error(errc::invalid_argument, "checkpoints must be positive");
    return c;
}

struct CorrelationReport {
    std::vector<std::uint64_t> checkpoints;
    /// S(N) = (1/N) sum_{n=1..N} mu(n) xi(n).
    std::vector<Complex> averages;
    SumMethod method = SumMethod::pairwise;
};

/// One-sided Mobius correlation at each checkpoint.
inline CorrelationReport correlate(const SequenceStream& xi, const MobiusTable& mu, std::vector<std::uint64_t> checkpoints,
                                   const ReduceOptions& opts = {})
{
    if (!xi.bounded())
        throw error(errc::unbounded_sequence, "correlation needs a bounded sequence (" + xi.note() + ")");
    checkpoints = normalize_checkpoints(std::move(checkpoints));
    if (!checkpoints.empty() && checkpoints.back() > mu.limit())
        throw error(errc::invalid_argument, "checkpoint beyond Mobius table limit");
    auto sums = prefix_sums<2>(
        [&](std::uint64_t i) -> std::array<double, 2> {
            const std::uint64_t n = i + 1;
            int m = mu(n);
            if (m == 0)
                return {0.0, 0.0};
            Complex v = xi(static_cast<std::int64_t>(n));
            return m > 0 ? std::array<double, 2>{v.real(), v.imag()} : std::array<double, 2>{-v.real(), -v.imag()};
        },
        checkpoints, opts);
    CorrelationReport r{checkpoints, {}, opts.method};
    for (std::size_t k = 0; k < checkpoints.size(); ++k)
        r.averages.emplace_back(sums[k][0] / static_cast<double>(checkpoints[k]),
                                sums[k][1] / static_cast<double>(checkpoints[k]));
    return r;
}

inline void write_correlation_csv(std::ostream& os, const CorrelationReport& r)
{
    char buf[128];
    os << "N,re_S,im_S,abs_S\n";
    for (std::size_t k = 0; k < r.checkpoints.size(); ++k) {
        const Complex& s = r.averages[k];
        std::snprintf(buf, sizeof buf, "%llu,%.17g,%.17g,%.17g\n", static_cast<unsigned long long>(r.checkpoints[k]),
                      s.real(), s.imag(), std::abs(s));
        os << buf;
    }
}

struct CesaroReport {
    std::vector<std::uint64_t> checkpoints;
    /// (1/(2N+1)) sum_{|n|<=N} |a_n|
    std::vector<double> mean_abs;
    /// (1/(2N+1)) sum_{|n|<=N} |a_n|^2
    std::vector<double> mean_sq;
    /// sqrt of mean_sq at the largest checkpoint.
    double quadratic_norm = 0.0;
};

/// Two-sided averages. The sum over -N..N is the fixed-tree sum over
/// n = 0..N plus the fixed-tree sum over n = -1..-N.
inline CesaroReport cesaro_stats(const SequenceStream& a, std::vector<std::uint64_t> checkpoints, const ReduceOptions& opts = {})
{
    checkpoints = normalize_checkpoints(std::move(checkpoints));
    std::vector<std::uint64_t> pos, neg;
    for (auto n : checkpoints) {
        pos.push_back(n + 1);
        neg.push_back(n);
    }
    auto f_pos = [&](std::uint64_t i) -> std::array<double, 2> {
        double v = std::abs(a(static_cast<std::int64_t>(i)));
        return {v, v * v};
    };
    auto f_neg = [&](std::uint64_t i) -> std::array<double, 2> {
        double v = std::abs(a(-static_cast<std::int64_t>(i) - 1));
        return {v, v * v};
    };
    auto sp = prefix_sums<2>(f_pos, pos, opts);
    auto sn = prefix_sums<2>(f_neg, neg, opts);
    CesaroReport r;
    r.checkpoints = checkpoints;
    for (std::size_t k = 0; k < checkpoints.size(); ++k) {
        const double w = 2.0 * static_cast<double>(checkpoints[k]) + 1.0;
        r.mean_abs.push_back((sp[k][0] + sn[k][0]) / w);
        r.mean_sq.push_back((sp[k][1] + sn[k][1]) / w);
    }
    if (!r.mean_sq.empty())
        r.quadratic_norm = std::sqrt(r.mean_sq.back());
    return r;
}

inline void write_cesaro_csv(std::ostream& os, const CesaroReport& r)
{
    char buf[128];
    os << "N,mean_abs,mean_sq\n";
    for (std::size_t k = 0; k < r.checkpoints.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%llu,%.17g,%.17g\n", static_cast<unsigned long long>(r.checkpoints[k]), r.mean_abs[k],
                      r.mean_sq[k]);
        os << buf;
    }
}

} // namespace nilseq
