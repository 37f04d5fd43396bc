#pragma once

#include "nilseq/detail/double_double.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

namespace nilseq {

enum class SumMethod { pairwise, compensated };

inline std::string to_string(SumMethod m) { return m == SumMethod::pairwise ? "pairwise" : "compensated"; }

struct ReduceOptions {
    SumMethod method = SumMethod::pairwise;
    unsigned threads = 1;
    /// Terms per block. Blocks are reduced independently and their sums are
    /// reduced by the same tree, so the result does not depend on threads.
    std::size_t block = std::size_t{1} << 16;
};

namespace detail {

inline constexpr std::size_t leaf_size = 16;

inline double tree_sum(const double* x, std::size_t n)
{
    if (n <= leaf_size) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            s += x[i];
        return s;
    }
    std::size_t h = n / 2;
    return tree_sum(x, h) + tree_sum(x + h, n - h);
}

inline DoubleDouble tree_sum_dd(const double* x, std::size_t n)
{
    if (n <= leaf_size) {
        DoubleDouble s;
        for (std::size_t i = 0; i < n; ++i)
            s = s + DoubleDouble{x[i], 0.0};
        return s;
    }
    std::size_t h = n / 2;
    return tree_sum_dd(x, h) + tree_sum_dd(x + h, n - h);
}

inline DoubleDouble tree_sum_dd(const DoubleDouble* x, std::size_t n)
{
    if (n == 0)
        return {};
    if (n == 1)
        return x[0];
    std::size_t h = n / 2;
    return tree_sum_dd(x, h) + tree_sum_dd(x + h, n - h);
}

inline DoubleDouble reduce_values(const double* x, std::size_t n, SumMethod m)
{
    return m == SumMethod::pairwise ? DoubleDouble{tree_sum(x, n), 0.0} : tree_sum_dd(x, n);
}

inline DoubleDouble reduce_partials(const std::vector<DoubleDouble>& p, std::size_t n, SumMethod m)
{
    if (m == SumMethod::compensated)
        return tree_sum_dd(p.data(), n);
    std::vector<double> h(n);
    for (std::size_t i = 0; i < n; ++i)
        h[i] = p[i].hi;
    return {tree_sum(h.data(), n), 0.0};
}

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn)
{
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < count; i += threads)
                fn(i);
        });
    for (auto& th : pool)
        th.join();
}

} // namespace detail

/// Sums of f(0) + ... + f(end - 1) for every end in `ends`, each of the C
/// channels reduced by a fixed tree: blocks of opts.block terms are summed
/// pairwise, then the full-block sums are summed pairwise, then the trailing
/// partial block is added. Serial and threaded runs give identical bits.
///
/// fill(lo, n, out) writes f(lo + i) for i < n into out[c][i].
template <std::size_t C, typename Fill>
std::vector<std::array<double, C>> prefix_sums_blocked(Fill&& fill, const std::vector<std::uint64_t>& ends,
                                                       const ReduceOptions& opts)
{
    using detail::DoubleDouble;
    const std::size_t B = std::max<std::size_t>(opts.block, 1);
    std::uint64_t top = 0;
    for (auto e : ends)
        top = std::max(top, e);
    const std::size_t full_blocks = static_cast<std::size_t>(top / B);

    auto reduce_range = [&](std::uint64_t lo, std::size_t n) {
        std::array<std::vector<double>, C> buf;
        std::array<double*, C> ptr;
        for (std::size_t c = 0; c < C; ++c) {
            buf[c].resize(n);
            ptr[c] = buf[c].data();
        }
        if (n)
            fill(lo, n, ptr);
        std::array<DoubleDouble, C> out;
        for (std::size_t c = 0; c < C; ++c)
            out[c] = detail::reduce_values(buf[c].data(), n, opts.method);
        return out;
    };

    std::array<std::vector<DoubleDouble>, C> block_sums;
    for (auto& b : block_sums)
        b.resize(full_blocks);
    detail::parallel_for(full_blocks, opts.threads, [&](std::size_t k) {
        auto s = reduce_range(static_cast<std::uint64_t>(k) * B, B);
        for (std::size_t c = 0; c < C; ++c)
            block_sums[c][k] = s[c];
    });

    std::vector<std::array<double, C>> result;
    for (auto e : ends) {
        const std::size_t nb = static_cast<std::size_t>(e / B);
        const std::size_t rest = static_cast<std::size_t>(e % B);
        auto tail = reduce_range(static_cast<std::uint64_t>(nb) * B, rest);
        std::array<double, C> r{};
        for (std::size_t c = 0; c < C; ++c) {
            DoubleDouble head = detail::reduce_partials(block_sums[c], nb, opts.method);
            r[c] = opts.method == SumMethod::compensated ? (head + tail[c]).value() : head.hi + tail[c].hi;
        }
        result.push_back(r);
    }
    return result;
}

/// prefix_sums_blocked with a per-index evaluator f(i) -> std::array<double, C>.
template <std::size_t C, typename F>
std::vector<std::array<double, C>> prefix_sums(F&& f, const std::vector<std::uint64_t>& ends, const ReduceOptions& opts)
{
    return prefix_sums_blocked<C>(
        [&](std::uint64_t lo, std::size_t n, const std::array<double*, C>& out) {
            for (std::size_t i = 0; i < n; ++i) {
                std::array<double, C> v = f(lo + i);
                for (std::size_t c = 0; c < C; ++c)
                    out[c][i] = v[c];
            }
        },
        ends, opts);
}

} // namespace nilseq
