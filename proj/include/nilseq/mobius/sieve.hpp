#pragma once

#include "nilseq/error.hpp"
#include "nilseq/mobius/reduction.hpp"

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace nilseq {

/// mu(1..N), two bits per value (00 -> 0, 01 -> +1, 11 -> -1), four values per
/// byte, n at bit offset 2 * ((n - 1) % 4) of byte (n - 1) / 4.
class MobiusTable {
public:
    MobiusTable() = default;
    MobiusTable(std::uint64_t limit, std::vector<std::uint8_t> packed) : limit_(limit), packed_(std::move(packed))
    {
        if (packed_.size() != bytes_for(limit_))
            throw error(errc::io_error, "packed Mobius data has the wrong length");
    }

    std::uint64_t limit() const noexcept { return limit_; }
    const std::vector<std::uint8_t>& packed() const noexcept { return packed_; }

    int operator()(std::uint64_t n) const
    {
        if (n == 0 || n > limit_)
            throw error(errc::invalid_argument, "mu(" + std::to_string(n) + ") outside table 1.." + std::to_string(limit_));
        unsigned bits = (packed_[(n - 1) / 4] >> (2 * ((n - 1) % 4))) & 3u;
        return bits == 1 ? 1 : bits == 3 ? -1 : 0;
    }

    static std::size_t bytes_for(std::uint64_t n) { return static_cast<std::size_t>((n + 3) / 4); }

    static void put(std::vector<std::uint8_t>& packed, std::uint64_t n, int mu)
    {
        std::uint8_t bits = mu == 1 ? 1 : mu == -1 ? 3 : 0;
        packed[(n - 1) / 4] |= static_cast<std::uint8_t>(bits << (2 * ((n - 1) % 4)));
    }

private:
    std::uint64_t limit_ = 0;
    std::vector<std::uint8_t> packed_;
};

struct SieveOptions {
    std::size_t segment = std::size_t{1} << 20;
    std::uint64_t cap = 1'000'000'000;
    unsigned threads = 1;
};

namespace detail {

inline std::vector<std::uint32_t> small_primes(std::uint32_t limit)
{
    std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
    std::vector<std::uint32_t> p;
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i])
            continue;
        p.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j <= limit; j += i)
            composite[j] = true;
    }
    return p;
}

inline std::uint32_t isqrt(std::uint64_t n)
{
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n)
        --r;
    while ((r + 1) * (r + 1) <= n)
        ++r;
    return static_cast<std::uint32_t>(r);
}

} // namespace detail

/// Segmented sieve. In each segment, every prime p <= sqrt(N) flips the sign
/// of its multiples and zeroes multiples of p^2; the running product of those
/// primes tells whether one prime factor above sqrt(N) remains.
inline MobiusTable sieve_mobius(std::uint64_t n, const SieveOptions& opts = {})
{
    if (n < 1)
        throw error(errc::invalid_argument, "sieve limit must be positive");
    if (n > opts.cap)
        throw error(errc::limit_too_large, std::to_string(n) + " exceeds the sieve cap " + std::to_string(opts.cap));
    const auto primes = detail::small_primes(detail::isqrt(n));
    // Segments are aligned to multiples of 4 so that threads never share a byte.
    const std::size_t seg = std::max<std::size_t>(4, opts.segment / 4 * 4);
    const std::size_t nseg = static_cast<std::size_t>((n + seg - 1) / seg);
    std::vector<std::uint8_t> packed(MobiusTable::bytes_for(n), 0);

    detail::parallel_for(nseg, opts.threads, [&](std::size_t s) {
        const std::uint64_t lo = 1 + static_cast<std::uint64_t>(s) * seg;
        const std::uint64_t hi = std::min<std::uint64_t>(n, lo + seg - 1);
        const std::size_t len = static_cast<std::size_t>(hi - lo + 1);
        std::vector<std::int8_t> mu(len, 1);
        std::vector<std::uint64_t> prod(len, 1);
        for (std::uint32_t p : primes) {
            const std::uint64_t pp = p;
            for (std::uint64_t m = (lo + pp - 1) / pp * pp; m <= hi; m += pp) {
                mu[m - lo] = static_cast<std::int8_t>(-mu[m - lo]);
                prod[m - lo] *= pp;
            }
            const std::uint64_t sq = pp * pp;
            for (std::uint64_t m = (lo + sq - 1) / sq * sq; m <= hi; m += sq)
                mu[m - lo] = 0;
        }
        for (std::size_t i = 0; i < len; ++i) {
            int v = mu[i];
            if (v != 0 && prod[i] != lo + i)
                v = -v;
            MobiusTable::put(packed, lo + i, v);
        }
    });
    return MobiusTable(n, std::move(packed));
}

/// Trial-division mu(n); slow, used as an oracle.
inline int mobius_trial(std::uint64_t n)
{
    int mu = 1;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p)
            continue;
        n /= p;
        if (n % p == 0)
            return 0;
        mu = -mu;
    }
    return n > 1 ? -mu : mu;
}

/// M(K) = sum_{n <= K} mu(n) at each checkpoint K (exact).
inline std::vector<std::int64_t> mertens(const MobiusTable& t, const std::vector<std::uint64_t>& checkpoints)
{
    std::vector<std::int64_t> out;
    for (auto k : checkpoints) {
        if (k > t.limit())
            throw error(errc::invalid_argument, "checkpoint " + std::to_string(k) + " beyond table limit");
        std::int64_t m = 0;
        for (std::uint64_t i = 1; i <= k; ++i)
            m += t(i);
        out.push_back(m);
    }
    return out;
}

inline constexpr char mobius_magic[4] = {'M', 'O', 'B', '1'};

inline void write_mobius_cache(const MobiusTable& t, const std::filesystem::path& file)
{
    std::filesystem::create_directories(file.parent_path().empty() ? "." : file.parent_path());
    auto tmp = file;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os)
            throw error(errc::io_error, "cannot write " + tmp.string());
        os.write(mobius_magic, 4);
        std::uint64_t n = t.limit();
        unsigned char le[8];
        for (int i = 0; i < 8; ++i)
            le[i] = static_cast<unsigned char>((n >> (8 * i)) & 0xffu);
        os.write(reinterpret_cast<const char*>(le), 8);
        os.write(reinterpret_cast<const char*>(t.packed().data()), static_cast<std::streamsize>(t.packed().size()));
        if (!os)
            throw error(errc::io_error, "short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, file);
}

inline MobiusTable read_mobius_cache(const std::filesystem::path& file)
{
    std::ifstream is(file, std::ios::binary);
    if (!is)
        throw error(errc::io_error, "cannot open " + file.string());
    char magic[4];
    unsigned char le[8];
    is.read(magic, 4);
    is.read(reinterpret_cast<char*>(le), 8);
    if (!is || std::string(magic, 4) != std::string(mobius_magic, 4))
        throw error(errc::io_error, file.string() + " is not a Mobius table");
    std::uint64_t n = 0;
    for (int i = 0; i < 8; ++i)
        n |= static_cast<std::uint64_t>(le[i]) << (8 * i);
    std::vector<std::uint8_t> packed(MobiusTable::bytes_for(n));
    is.read(reinterpret_cast<char*>(packed.data()), static_cast<std::streamsize>(packed.size()));
    if (!is)
        throw error(errc::io_error, file.string() + " is truncated");
    return MobiusTable(n, std::move(packed));
}

/// Truncates a table to 1..n.
inline MobiusTable truncate(const MobiusTable& t, std::uint64_t n)
{
    if (n >= t.limit())
        return t;
    std::vector<std::uint8_t> packed(t.packed().begin(), t.packed().begin() + static_cast<std::ptrdiff_t>(MobiusTable::bytes_for(n)));
    if (n % 4)
        packed.back() &= static_cast<std::uint8_t>((1u << (2 * (n % 4))) - 1);
    return MobiusTable(n, std::move(packed));
}

/// Reuses `<dir>/mobius.bin` when it covers n, otherwise sieves and rewrites it.
/// An empty dir disables caching.
inline MobiusTable load_or_sieve(std::uint64_t n, const std::string& cache_dir, const SieveOptions& opts = {})
{
    if (n > opts.cap)
        throw error(errc::limit_too_large, std::to_string(n) + " exceeds the sieve cap " + std::to_string(opts.cap));
    if (cache_dir.empty())
        return sieve_mobius(n, opts);
    const std::filesystem::path file = std::filesystem::path(cache_dir) / "mobius.bin";
    if (std::filesystem::exists(file)) {
        try {
            MobiusTable t = read_mobius_cache(file);
            if (t.limit() >= n)
                return truncate(t, n);
        } catch (const error&) {
            // Unreadable cache: rebuild below.
        }
    }
    MobiusTable t = sieve_mobius(n, opts);
    write_mobius_cache(t, file);
    return t;
}

/// NILSEQ_CACHE_DIR, or empty.
inline std::string default_cache_dir()
{
    const char* v = std::getenv("NILSEQ_CACHE_DIR");
    return v ? std::string(v) : std::string();
}

} // namespace nilseq
