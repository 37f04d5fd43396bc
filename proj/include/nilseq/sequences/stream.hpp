#pragma once

#include "nilseq/error.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace nilseq {

using Complex = std::complex<double>;

enum class SeqClass { nil, zero_density, almost_nil, unknown };

/// Classification tag. step is meaningful only for nil.
struct SeqTag {
    SeqClass cls = SeqClass::unknown;
    int step = 0;

    static SeqTag nil(int step) { return {SeqClass::nil, step}; }
    static SeqTag zero_density() { return {SeqClass::zero_density, 0}; }
    static SeqTag almost_nil() { return {SeqClass::almost_nil, 0}; }
    static SeqTag unknown() { return {SeqClass::unknown, 0}; }

    bool operator==(const SeqTag&) const = default;

    std::string str() const
    {
        switch (cls) {
        case SeqClass::nil:
            return "Nil(" + std::to_string(step) + ")";
        case SeqClass::zero_density:
            return "ZeroDensity";
        case SeqClass::almost_nil:
            return "AlmostNil";
        default:
            return "Unknown";
        }
    }
};

/// Lazy complex sequence on Z. The evaluator must be pure; streams are cheap to
/// copy and safe to evaluate concurrently.
class SequenceStream {
public:
    using Evaluator = std::function<Complex(std::int64_t)>;

    SequenceStream() = default;
    SequenceStream(Evaluator f, std::optional<double> bound, SeqTag tag, std::string note)
        : f_(std::make_shared<const Evaluator>(std::move(f))), bound_(bound), tag_(tag), note_(std::move(note))
    {
    }

    Complex operator()(std::int64_t n) const { return (*f_)(n); }
    Complex at(std::int64_t n) const { return (*f_)(n); }

    const std::optional<double>& bound() const noexcept { return bound_; }
    bool bounded() const noexcept { return bound_.has_value(); }
    const SeqTag& tag() const noexcept { return tag_; }
    const std::string& note() const noexcept { return note_; }

    SequenceStream with_tag(SeqTag tag, std::string note) const
    {
        SequenceStream s = *this;
        s.tag_ = tag;
        s.note_ = std::move(note);
        return s;
    }

    /// Samples n in [lo, hi] and reports the first n with |a_n| above the bound.
    std::optional<std::int64_t> check_bound(std::int64_t lo, std::int64_t hi, double slack = 1e-9) const
    {
        if (!bound_)
            return std::nullopt;
        for (std::int64_t n = lo; n <= hi; ++n)
            if (std::abs(at(n)) > *bound_ + slack)
                return n;
        return std::nullopt;
    }

private:
    std::shared_ptr<const Evaluator> f_ = std::make_shared<const Evaluator>([](std::int64_t) { return Complex(0.0); });
    std::optional<double> bound_ = 0.0;
    SeqTag tag_ = SeqTag::zero_density();
    std::string note_ = "zero";
};

namespace detail {

inline std::optional<double> combine_bound(const std::optional<double>& a, const std::optional<double>& b, bool product)
{
    if (!a || !b)
        return std::nullopt;
    return product ? *a * *b : *a + *b;
}

inline bool is_known(SeqClass c) { return c != SeqClass::unknown; }

} // namespace detail

inline SeqTag add_tag(const SeqTag& a, const SeqTag& b)
{
    using C = SeqClass;
    if (a.cls == C::unknown || b.cls == C::unknown)
        return SeqTag::unknown();
    if (a.cls == C::nil && b.cls == C::nil)
        return SeqTag::nil(std::max(a.step, b.step));
    if (a.cls == C::zero_density && b.cls == C::zero_density)
        return SeqTag::zero_density();
    return SeqTag::almost_nil();
}

inline SeqTag mul_tag(const SeqTag& a, const SeqTag& b, bool both_bounded)
{
    using C = SeqClass;
    if (a.cls == C::nil && b.cls == C::nil)
        return SeqTag::nil(std::max(a.step, b.step));
    if ((a.cls == C::zero_density || b.cls == C::zero_density) && both_bounded)
        return SeqTag::zero_density();
    if (a.cls == C::unknown || b.cls == C::unknown || a.cls == C::zero_density || b.cls == C::zero_density)
        return SeqTag::unknown();
    // nil * almost-nil, almost-nil * almost-nil: products of bounded
    // nil + zero-density sums expand into the same form.
    if (both_bounded)
        return SeqTag::almost_nil();
    return SeqTag::unknown();
}

inline SequenceStream add(const SequenceStream& a, const SequenceStream& b)
{
    return SequenceStream([a, b](std::int64_t n) { return a(n) + b(n); }, detail::combine_bound(a.bound(), b.bound(), false),
                          add_tag(a.tag(), b.tag()), "(" + a.note() + ") + (" + b.note() + ")");
}

inline SequenceStream mul(const SequenceStream& a, const SequenceStream& b)
{
    return SequenceStream([a, b](std::int64_t n) { return a(n) * b(n); }, detail::combine_bound(a.bound(), b.bound(), true),
                          mul_tag(a.tag(), b.tag(), a.bounded() && b.bounded()),
                          "(" + a.note() + ") * (" + b.note() + ")");
}

inline SequenceStream scale(const SequenceStream& a, Complex c)
{
    auto bound = a.bound() ? std::optional<double>(*a.bound() * std::abs(c)) : std::nullopt;
    SeqTag tag = c == Complex(0.0) ? SeqTag::zero_density() : a.tag();
    return SequenceStream([a, c](std::int64_t n) { return c * a(n); }, bound, tag, "c * (" + a.note() + ")");
}

inline SequenceStream conj(const SequenceStream& a)
{
    return SequenceStream([a](std::int64_t n) { return std::conj(a(n)); }, a.bound(), a.tag(), "conj(" + a.note() + ")");
}

inline SequenceStream shift(const SequenceStream& a, std::int64_t k)
{
    if (k == 0)
        return a;
    return SequenceStream([a, k](std::int64_t n) { return a(n + k); }, a.bound(), a.tag(),
                          "shift(" + a.note() + ", " + std::to_string(k) + ")");
}

inline SequenceStream constant_seq(Complex c)
{
    return SequenceStream([c](std::int64_t) { return c; }, std::abs(c), SeqTag::nil(0), "const");
}

/// Finitely supported sequence; zero density by construction.
inline SequenceStream finite_support(std::map<std::int64_t, Complex> values)
{
    double b = 0.0;
    for (const auto& [n, v] : values)
        b = std::max(b, std::abs(v));
    auto data = std::make_shared<const std::map<std::int64_t, Complex>>(std::move(values));
    return SequenceStream(
        [data](std::int64_t n) {
            auto it = data->find(n);
            return it == data->end() ? Complex(0.0) : it->second;
        },
        b, SeqTag::zero_density(), "finite support");
}

/// [n == k].
inline SequenceStream indicator(std::int64_t k) { return finite_support({{k, Complex(1.0)}}).with_tag(SeqTag::zero_density(), "indicator(n=" + std::to_string(k) + ")"); }

/// Indicator of the perfect squares n = j^2 (j in Z); density zero.
inline SequenceStream square_indicator()
{
    return SequenceStream(
        [](std::int64_t n) {
            if (n < 0)
                return Complex(0.0);
            auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
            while (r * r > n)
                --r;
            while ((r + 1) * (r + 1) <= n)
                ++r;
            return r * r == n ? Complex(1.0) : Complex(0.0);
        },
        1.0, SeqTag::zero_density(), "squares");
}

/// xi(t m + r) = components[r](t).
inline SequenceStream interleave(const std::vector<SequenceStream>& components, std::size_t m)
{
    if (m == 0)
        throw error(errc::invalid_argument, "interleave needs m >= 1");
    if (components.size() != m)
        throw error(errc::arity_mismatch,
                    "expected " + std::to_string(m) + " components, got " + std::to_string(components.size()));
    if (m == 1)
        return components[0];
    bool all_nil = true, all_zd = true, any_unknown = false, all_bounded = true;
    int step = 0;
    double bound = 0.0;
    for (const auto& c : components) {
        all_nil = all_nil && c.tag().cls == SeqClass::nil;
        all_zd = all_zd && c.tag().cls == SeqClass::zero_density;
        any_unknown = any_unknown || c.tag().cls == SeqClass::unknown;
        step = std::max(step, c.tag().step);
        if (c.bound())
            bound = std::max(bound, *c.bound());
        else
            all_bounded = false;
    }
    SeqTag tag = any_unknown ? SeqTag::unknown()
                 : all_nil   ? SeqTag::nil(std::max(step, 1))
                 : all_zd    ? SeqTag::zero_density()
                             : SeqTag::almost_nil();
    const auto mm = static_cast<std::int64_t>(m);
    return SequenceStream(
        [components, mm](std::int64_t n) {
            std::int64_t r = ((n % mm) + mm) % mm;
            std::int64_t t = (n - r) / mm;
            return components[static_cast<std::size_t>(r)](t);
        },
        all_bounded ? std::optional<double>(bound) : std::nullopt, tag, "interleave(" + std::to_string(m) + ")");
}

/// eta_r(t) = xi(t m + r). Subsequences along progressions keep the class.
inline std::vector<SequenceStream> deinterleave(const SequenceStream& xi, std::size_t m)
{
    if (m == 0)
        throw error(errc::invalid_argument, "deinterleave needs m >= 1");
    std::vector<SequenceStream> out;
    const auto mm = static_cast<std::int64_t>(m);
    for (std::int64_t r = 0; r < mm; ++r)
        out.emplace_back([xi, mm, r](std::int64_t t) { return xi(t * mm + r); }, xi.bound(), xi.tag(),
                         xi.note() + "[" + std::to_string(m) + "t+" + std::to_string(r) + "]");
    return out;
}

/// CSV dump `n,re,im` for lo <= n <= hi.
inline void write_sequence_csv(std::ostream& os, const SequenceStream& s, std::int64_t lo, std::int64_t hi)
{
    char buf[96];
    os << "n,re,im\n";
    for (std::int64_t n = lo; n <= hi; ++n) {
        Complex v = s(n);
        std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g\n", static_cast<long long>(n), v.real(), v.imag());
        os << buf;
    }
}

} // namespace nilseq
